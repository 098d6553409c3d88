"""Tests for constraint extraction from controller source."""

import itertools
import json
import math
import random

import pytest

from constraint_miner.constraints import build_domain, equivalent, parse_dsl
from constraint_miner.frontend import MethodRef
from constraint_miner.frontend.parser import parse_expression
from constraint_miner.static_analysis import (
    ConstraintExtractor,
    DiagnosticLog,
    Evaluator,
    VariableStack,
    analyze_program,
    build_call_graph,
    read_diagnostics,
    resolve_param_ref,
)
from constraint_miner.static_analysis.values import IntConst, Unknown

MODEL = """
public class CardRequest {
    private String reference;
    private Card card;
    private Integer amount;
    private Boolean partial;
    private String currency;
    private String channel;
    private String returnUrl;
    private List<String> tags;
    private List<Split> splits;

    public String getReference() { return reference; }
    public Card getCard() { return card; }
    public Integer getAmount() { return amount; }
    public Boolean getPartial() { return partial; }
    public String getCurrency() { return currency; }
    public String getChannel() { return channel; }
    public String getReturnUrl() { return returnUrl; }
    public List<String> getTags() { return tags; }
    public List<Split> getSplits() { return splits; }
}

class Card {
    private String number;
    private String issuer;

    public String getNumber() { return number; }
    public String getIssuer() { return issuer; }
}

class Split {
    private String account;

    public String getAccount() { return account; }
}
"""

MODELS = ["CardRequest", "Card", "Split"]


def controller(body: str, members: str = "") -> str:
    return f"""
public class CardController {{
    {members}

    public void submit(CardRequest request) {{
        {body}
    }}
}}
"""


@pytest.fixture
def analyze(build_program):
    def _analyze(source: str, max_depth=None):
        program = build_program(
            {"CardRequest.mj": MODEL, "CardController.mj": source},
            controllers=["CardController.submit"],
            requestModels=MODELS,
        )
        return analyze_program(program, endpoint="/cards", max_depth=max_depth)

    return _analyze


def rendered(analysis):
    return {c.render() for c in analysis.constraints}


def expected(*lines):
    return {c.render() for c in parse_dsl("\n".join(lines))}


def kinds(analysis):
    return {d.kind for d in analysis.diagnostics}


class TestGuards:
    def test_unparsed_call_keeps_parsed_neighbour(self, analyze):
        analysis = analyze(controller("""
        Card card = request.getCard();
        if (!isValidCard(card) && card.getIssuer() != null) {
            throw new IllegalArgumentException("issuer");
        }
        """))
        (constraint,) = analysis.constraints
        assert constraint.render_term() == 'and(not(Unparsed("isValidCard(card)")), present(card.issuer))'
        assert constraint.partial
        assert constraint.source_ref == "CardController.mj:9"
        assert {"unparsed", "external"} <= kinds(analysis)

    def test_comparisons_with_constants(self, analyze):
        analysis = analyze(controller(
            """
            if (request.getAmount() > MAX) { throw new IllegalArgumentException("amount"); }
            if (request.getReference().length() < 3) { throw new IllegalArgumentException("reference"); }
            if (!"scheme".equals(request.getChannel())) { throw new IllegalArgumentException("channel"); }
            """,
            members="private static final int MAX = 100;",
        ))
        assert rendered(analysis) == expected(
            "amount > 100 -> invalid",
            "len(reference) < 3 -> invalid",
            'channel != "scheme" -> invalid',
        )

    def test_collections(self, analyze):
        analysis = analyze(controller(
            """
            if (!CURRENCIES.contains(request.getCurrency())) { throw new IllegalArgumentException("currency"); }
            if (request.getTags() != null && request.getTags().isEmpty()) { throw new IllegalArgumentException("tags"); }
            """,
            members='private static final List<String> CURRENCIES = List.of("EUR", "USD");',
        ))
        assert rendered(analysis) == expected(
            'not currency in {"EUR", "USD"} -> invalid',
            "tags != null and len(tags) == 0 -> invalid",
        )

    def test_boolean_parameter_used_bare(self, analyze):
        analysis = analyze(controller(
            'if (request.getPartial() && request.getReference() == null) { throw new IllegalArgumentException("x"); }'
        ))
        assert rendered(analysis) == expected("requires(partial == true, reference)")

    def test_invalid_state_pattern(self, analyze):
        analysis = analyze(controller('if (request.getAmount() < 0) { addError("amount"); }'))
        assert rendered(analysis) == expected("amount < 0 -> invalid")

    def test_switch(self, analyze):
        analysis = analyze(controller("""
        switch (request.getChannel()) {
            case "web":
                if (request.getReturnUrl() == null) {
                    throw new IllegalArgumentException("returnUrl");
                }
                break;
            default:
                throw new IllegalArgumentException("channel");
        }
        """))
        assert rendered(analysis) == expected(
            'requires(channel == "web", returnUrl)',
            'channel != "web" -> invalid',
        )


class TestPaths:
    def test_early_return_is_negated(self, analyze):
        analysis = analyze(controller("""
        if (request.getPartial()) {
            return;
        }
        if (request.getReference() == null) {
            throw new IllegalArgumentException("reference");
        }
        """))
        assert rendered(analysis) == expected("not partial == true and not present(reference) -> invalid")
        assert "fall-through" in kinds(analysis)

    def test_throw_is_not_an_exit(self, analyze):
        analysis = analyze(controller("""
        if (request.getAmount() == null) {
            throw new IllegalArgumentException("amount");
        }
        if (request.getReference() == null) {
            throw new IllegalArgumentException("reference");
        }
        """))
        assert rendered(analysis) == expected("not present(amount) -> invalid", "not present(reference) -> invalid")

    def test_write_under_other_branch_reads_unknown(self, analyze):
        analysis = analyze(controller("""
        boolean needsCard = false;
        if (request.getAmount() > 100) {
            needsCard = true;
        }
        if (needsCard && request.getCard() == null) {
            throw new IllegalArgumentException("card");
        }
        """))
        (constraint,) = analysis.constraints
        assert constraint.render() == 'not present(card) and unparsed("needsCard") -> invalid'

    def test_boolean_local_holds_condition(self, analyze):
        analysis = analyze(controller("""
        boolean missing = request.getReference() == null;
        if (missing) {
            throw new IllegalArgumentException("reference");
        }
        """))
        assert rendered(analysis) == expected("not present(reference) -> invalid")

    def test_for_each_over_parameter(self, analyze):
        analysis = analyze(controller("""
        for (Split split : request.getSplits()) {
            if (split.getAccount() == null) {
                throw new IllegalArgumentException("account");
            }
        }
        """))
        assert rendered(analysis) == expected("requires(splits, splits.account)")

    def test_new_object_loses_parameters(self, analyze):
        analysis = analyze(controller("""
        Holder holder = new Holder(request.getCard());
        if (holder.getCard() == null) {
            throw new IllegalArgumentException("card");
        }
        """))
        (constraint,) = analysis.constraints
        assert constraint.partial


class TestCalls:
    def test_callee_constraints_carry_call_site_condition(self, analyze):
        analysis = analyze(controller(
            """
            if (request.getCard() != null) {
                validateCard(request.getCard());
            }
            """,
            members="""
            private void validateCard(Card card) {
                if (card.getNumber() == null) {
                    throw new IllegalArgumentException("number");
                }
            }
            """,
        ))
        assert rendered(analysis) == expected("requires(card, card.number)")

    def test_boolean_helper_is_summarized(self, analyze):
        analysis = analyze(controller(
            """
            if (!hasIssuer(request.getCard())) {
                throw new IllegalArgumentException("issuer");
            }
            """,
            members="""
            private boolean hasIssuer(Card card) {
                return card != null && card.getIssuer() != null;
            }
            """,
        ))
        assert rendered(analysis) == expected("not (card != null and card.issuer != null) -> invalid")

    def test_returned_value_is_propagated(self, analyze):
        analysis = analyze(controller(
            """
            if (request.getAmount() > limit()) {
                throw new IllegalArgumentException("amount");
            }
            """,
            members="""
            private int limit() {
                return 500;
            }
            """,
        ))
        assert rendered(analysis) == expected("amount > 500 -> invalid")


CHAIN = """
public class Chain {
    public void a(CardRequest request) { b(request); }
    void b(CardRequest request) { c(request); }
    void c(CardRequest request) {
        a(request);
        d();
        audit(request);
    }
    void d() { }
}
"""


class TestCallGraph:
    @pytest.fixture
    def program(self, build_program):
        return build_program(
            {"CardRequest.mj": MODEL, "Chain.mj": CHAIN},
            controllers=["Chain.a"],
            requestModels=MODELS,
        )

    def test_depths(self, program):
        graph = build_call_graph(program, MethodRef("Chain", "a"))
        assert graph.depth(MethodRef("Chain", "c")) == 2
        assert graph.depth(MethodRef("Chain", "d")) == 3
        assert [site.callee for site in graph.recursive] == ["Chain.a"]
        assert [site.callee for site in graph.external] == ["external:audit"]
        assert graph.callees(MethodRef("Chain", "c")) == ["Chain.a", "Chain.d", "external:audit"]

    def test_truncation(self, program):
        graph = build_call_graph(program, MethodRef("Chain", "a"), max_depth=1)
        assert graph.depth(MethodRef("Chain", "b")) == 1
        assert graph.depth(MethodRef("Chain", "c")) is None
        assert [site.callee for site in graph.truncated] == ["Chain.c"]
        assert graph.to_dict()["maxDepth"] == 1

    def test_analysis_reports_lost_precision(self, program):
        assert {"recursive", "external"} <= kinds(analyze_program(program))
        assert "truncated" in kinds(analyze_program(program, max_depth=1))


PEOPLE = """
public class Req {
    private Person shopper;
    private Person merchant;
    private String name;
}

class Person {
    private String name;
}
"""


class TestResolution:
    @pytest.fixture
    def program(self, build_program):
        controller_source = "class Api { public void post(Req request) { } }"
        return build_program(
            {"Req.mj": PEOPLE, "Api.mj": controller_source},
            controllers=["Api.post"],
            requestModels=["Req", "Person"],
        )

    def test_model_narrows_candidates(self, program):
        resolution = resolve_param_ref("name", VariableStack(), program, model="Person")
        assert resolution.candidates == ("shopper.name", "merchant.name")
        assert resolution.path == "merchant.name"
        assert resolution.ambiguous

    def test_most_recent_access_wins(self, program):
        stack = VariableStack()
        stack.touch("shopper")
        resolution = resolve_param_ref("name", stack, program, model="Person")
        assert resolution.path == "shopper.name"
        assert not resolution.ambiguous

    def test_without_model_shortest_path(self, program):
        resolution = resolve_param_ref("name", VariableStack(), program)
        assert resolution.path == "name"

    def test_unknown_field(self, program):
        assert resolve_param_ref("iban", VariableStack(), program) is None


class TestVariableStack:
    def test_scopes_and_frames(self):
        stack = VariableStack()
        stack.declare("x", IntConst(1))
        stack.sync([1, 2])
        stack.declare("y", IntConst(2))
        assert stack.value("x") == IntConst(1)
        stack.sync([1])
        assert stack.value("y") is None
        stack.push_frame()
        assert stack.value("x") is None
        stack.pop_frame()
        assert stack.value("x") == IntConst(1)

    def test_visibility_follows_guards(self):
        stack = VariableStack()
        stack.declare("flag", IntConst(0))
        stack.assign("flag", IntConst(1), guards=("g1",))
        binding = stack.lookup("flag")
        assert binding.visible_under(("g1", "g2"))
        assert not binding.visible_under(())

    def test_outermost_frame_stays(self):
        with pytest.raises(RuntimeError):
            VariableStack().pop_frame()


class TestOutputs:
    def test_write(self, analyze, tmp_path):
        analysis = analyze(controller(
            'if (!isValid(request.getReference())) { throw new IllegalArgumentException("x"); }'
        ))
        gt_path, diagnostics_path = analysis.write(tmp_path)
        reread = parse_dsl(gt_path.read_text(encoding="utf-8"))
        assert [c.render() for c in reread] == [c.render() for c in analysis.constraints]
        assert reread[0].source_ref == analysis.constraints[0].source_ref
        assert read_diagnostics(diagnostics_path) == analysis.diagnostics
        assert isinstance(json.loads(diagnostics_path.read_text(encoding="utf-8")), list)

    def test_log_deduplicates(self):
        log = DiagnosticLog()
        log.add("unparsed", "x()", "A.mj:1:1")
        log.add("unparsed", "x()", "A.mj:1:1")
        assert len(log) == 1
        with pytest.raises(ValueError):
            log.add("mystery", "x")


# --------------------------------------------------------------------------
# Randomized checks over generated controller bodies.

GUARD_ATOMS = [
    "request.getAmount() > 100",
    "request.getReference() == null",
    "request.getCard() != null",
    '"scheme".equals(request.getChannel())',
    "request.getReference().length() < 3",
    "request.getPartial()",
]

HELPERS = """
    private void validateCard(Card card) {
        if (card.getNumber() == null) {
            throw new IllegalArgumentException("number");
        }
    }

    private boolean hasIssuer(Card card) {
        return card != null && card.getIssuer() != null;
    }
"""


def random_guard(rng: random.Random) -> str:
    parts = []
    for atom in rng.sample(GUARD_ATOMS, rng.randint(1, 3)):
        parts.append(f"!({atom})" if rng.random() < 0.3 else atom)
    return f" {rng.choice(['&&', '||'])} ".join(parts)


def random_statements(rng: random.Random, names, depth: int = 0):
    lines = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(["if", "if", "local", "loop", "call", "switch"])
        name = f"v{next(names)}"
        if kind == "if":
            if depth < 2 and rng.random() < 0.5:
                body = random_statements(rng, names, depth + 1)
            else:
                body = rng.choice(['throw new IllegalArgumentException("x");', 'addError("x");', "return;"])
            lines.append(f"if ({random_guard(rng)}) {{ {body} }}")
            if rng.random() < 0.3:
                lines.append(f'else {{ if (!hasIssuer(request.getCard())) {{ addError("{name}"); }} }}')
        elif kind == "local":
            lines.append(f"boolean {name} = {rng.choice(GUARD_ATOMS)};")
            lines.append(f'if ({name}) {{ throw new IllegalArgumentException("{name}"); }}')
        elif kind == "loop":
            lines.append(
                f"for (Split {name} : request.getSplits()) {{ "
                f'if ({name}.getAccount() == null) {{ throw new IllegalArgumentException("{name}"); }} }}'
            )
        elif kind == "call":
            lines.append("validateCard(request.getCard());")
        else:
            lines.append(
                "switch (request.getChannel()) { "
                'case "web": if (request.getReturnUrl() == null) { addError("url"); } break; '
                'default: break; }'
            )
    return "\n".join(lines)


class BalanceCheckingExtractor(ConstraintExtractor):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.unbalanced = []

    def walk(self, ref, args, prefix, mode):
        before = self.stack.snapshot()
        try:
            return super().walk(ref, args, prefix, mode)
        finally:
            if self.stack.snapshot() != before:
                self.unbalanced.append(ref)


def card_program(build_program, body: str, members: str = HELPERS):
    return build_program(
        {"CardRequest.mj": MODEL, "CardController.mj": controller(body, members)},
        controllers=["CardController.submit"],
        requestModels=MODELS,
    )


class TestStackBalanceProperty:
    @pytest.mark.parametrize("seed", range(5))
    def test_every_walk_leaves_the_stack_as_found(self, build_program, seed):
        rng = random.Random(seed)
        for _ in range(20):
            program = card_program(build_program, random_statements(rng, itertools.count()))
            extractor = BalanceCheckingExtractor(program, MethodRef("CardController", "submit"))
            initial = extractor.stack.snapshot()
            extractor.extract()
            assert not extractor.unbalanced
            assert extractor.stack.depth == 1
            assert extractor.stack.snapshot() == initial


def random_arithmetic(rng: random.Random, depth: int = 3):
    """Source text of a constant expression and its value under int semantics."""
    if depth == 0 or rng.random() < 0.3:
        n = rng.randint(0, 9)
        return str(n), n
    if rng.random() < 0.15:
        text, value = random_arithmetic(rng, depth - 1)
        return f"-({text})", None if value is None else -value
    op = rng.choice("+-*/%")
    left_text, left = random_arithmetic(rng, depth - 1)
    right_text, right = random_arithmetic(rng, depth - 1)
    text = f"({left_text} {op} {right_text})"
    if left is None or right is None or (op in "/%" and right == 0):
        return text, None
    if op == "+":
        return text, left + right
    if op == "-":
        return text, left - right
    if op == "*":
        return text, left * right
    quotient = math.trunc(left / right)
    return text, quotient if op == "/" else left - right * quotient


class TestConstantFoldingProperty:
    @pytest.mark.parametrize("seed", range(5))
    def test_folding_matches_integer_arithmetic(self, build_program, seed):
        rng = random.Random(seed)
        program = card_program(build_program, "")
        evaluator = Evaluator(program, VariableStack(), MethodRef("CardController", "submit"), {})
        for _ in range(100):
            text, value = random_arithmetic(rng)
            result = evaluator.eval(parse_expression(text))
            if value is None:
                assert isinstance(result, Unknown), text
            else:
                assert result == IntConst(value), text


class TestInliningProperty:
    @pytest.mark.parametrize("seed", range(5))
    def test_guard_moved_into_helper_is_equivalent(self, build_program, seed):
        rng = random.Random(seed)
        for _ in range(10):
            guard = random_guard(rng)
            outer = random_guard(rng) if rng.random() < 0.5 else None

            def wrapped(statement):
                return f"if ({outer}) {{ {statement} }}" if outer else statement

            inline = wrapped(f'if ({guard}) {{ throw new IllegalArgumentException("x"); }}')
            void_helper = (
                wrapped("check(request);"),
                f'private void check(CardRequest request) {{ if ({guard}) {{ throw new IllegalArgumentException("x"); }} }}',
            )
            boolean_helper = (
                wrapped('if (invalid(request)) { throw new IllegalArgumentException("x"); }'),
                f"private boolean invalid(CardRequest request) {{ return {guard}; }}",
            )

            (expected,) = analyze_program(card_program(build_program, inline, "")).constraints
            for body, members in (void_helper, boolean_helper):
                (moved,) = analyze_program(card_program(build_program, body, members)).constraints
                domain = build_domain([expected, moved])
                assert equivalent(expected, moved, domain), (guard, outer, moved.render())
