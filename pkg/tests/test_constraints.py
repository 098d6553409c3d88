"""Tests for formulas, constraint sugar, decomposition and equivalence."""

import itertools
import random

import pytest

from constraint_miner.constraints import (
    ABSENT,
    FALSE,
    TRUE,
    And,
    Assignment,
    Cmp,
    CmpParams,
    Constraint,
    Eq,
    InSet,
    Leaf,
    Len,
    Not,
    Or,
    Present,
    Unparsed,
    absent,
    all_or_none,
    any_of,
    build_domain,
    combine,
    decompose,
    dedupe,
    equivalent,
    evaluate,
    exactly_one,
    normalize,
    present,
    render,
    requires,
)
from constraint_miner.constraints.domain import Domain
from constraint_miner.constraints.formula import referenced_paths
from constraint_miner.exceptions import DomainCoverageError, PartialConstraintError


def c(formula):
    return Constraint(formula)


class TestNormalize:
    def test_flattens_and_sorts(self):
        f = And.of(present("b"), And.of(present("a"), present("b")))
        assert normalize(f) == And.of(present("a"), present("b"))

    def test_double_negation(self):
        assert normalize(Not(Not(present("a")))) == present("a")

    def test_constants_absorb(self):
        assert normalize(And.of(present("a"), FALSE)) == FALSE
        assert normalize(Or.of(present("a"), TRUE)) == TRUE
        assert normalize(Not(TRUE)) == FALSE
        assert normalize(And.of(present("a"), TRUE)) == present("a")

    def test_single_child_collapses(self):
        assert normalize(Or.of(present("a"))) == present("a")

    def test_idempotent(self):
        f = Or.of(Not(Not(And.of(present("b"), present("a")))), absent("c"), absent("c"))
        once = normalize(f)
        assert normalize(once) == once

    def test_render_parenthesizes_disjunction_in_conjunction(self):
        f = normalize(And.of(present("a"), Or.of(absent("b"), absent("c"))))
        assert render(f) == "a and (not b or not c)"


class TestEvaluate:
    def test_absent_paths_fail_value_atoms(self):
        empty = Assignment({"a": ABSENT})
        for atom in (Eq("a", 1), Cmp("a", "<", 3), Len("a", "==", 0), InSet("a", frozenset({1}))):
            assert not evaluate(Leaf(atom), empty)

    def test_param_comparison(self):
        f = Leaf(CmpParams("min", ">", "max"))
        assert evaluate(f, Assignment({"min": 5, "max": 3}))
        assert not evaluate(f, Assignment({"min": 5, "max": ABSENT}))

    def test_length_of_strings(self):
        f = Leaf(Len("ref", ">", 3))
        assert evaluate(f, Assignment({"ref": "abcd"}))
        assert not evaluate(f, Assignment({"ref": "abc"}))

    def test_unparsed_needs_a_truth_value(self):
        with pytest.raises(PartialConstraintError):
            evaluate(Leaf(Unparsed("x.isValid()")), Assignment({}))

    def test_missing_path_is_a_coverage_error(self):
        with pytest.raises(DomainCoverageError):
            evaluate(present("a"), Assignment({}))


class TestSugar:
    def test_requires_single_target(self):
        f = requires(present("a"), ["b"])
        assert evaluate(f, Assignment({"a": 1, "b": ABSENT}))
        assert not evaluate(f, Assignment({"a": 1, "b": 1}))
        assert not evaluate(f, Assignment({"a": ABSENT, "b": ABSENT}))

    def test_requires_needs_targets(self):
        with pytest.raises(ValueError):
            requires(present("a"), [])

    def test_any_of(self):
        f = any_of(["a", "b"])
        assert evaluate(f, Assignment({"a": ABSENT, "b": ABSENT}))
        assert not evaluate(f, Assignment({"a": 1, "b": ABSENT}))

    def test_exactly_one(self):
        f = exactly_one(["a", "b", "c"])
        assert evaluate(f, Assignment({"a": ABSENT, "b": ABSENT, "c": ABSENT}))
        assert evaluate(f, Assignment({"a": 1, "b": ABSENT, "c": 1}))
        assert not evaluate(f, Assignment({"a": ABSENT, "b": 1, "c": ABSENT}))

    def test_all_or_none(self):
        f = all_or_none(["a", "b"])
        assert not evaluate(f, Assignment({"a": ABSENT, "b": ABSENT}))
        assert not evaluate(f, Assignment({"a": 1, "b": 1}))
        assert evaluate(f, Assignment({"a": ABSENT, "b": 1}))

    @pytest.mark.parametrize("builder", [any_of, exactly_one, all_or_none])
    def test_groups_reject_repeats(self, builder):
        with pytest.raises(ValueError):
            builder(["a", "a"])
        with pytest.raises(ValueError):
            builder(["a"])


class TestConstraint:
    def test_classes(self):
        assert c(absent("a")).constraint_class == "single"
        assert c(And.of(present("a"), absent("b"))).constraint_class == "inter"
        assert c(And.of(Leaf(Unparsed("f(a)")), absent("b"))).constraint_class == "single"
        assert Constraint(absent("a"), label_class="inter").constraint_class == "inter"

    def test_partial(self):
        assert c(And.of(Leaf(Unparsed("x")), absent("b"))).partial
        assert not c(absent("b")).partial

    def test_render(self):
        assert c(requires(present("card"), ["card.number"])).render() == "card and not card.number -> invalid"

    def test_dedupe_keeps_first(self):
        first = c(And.of(present("a"), absent("b")))
        second = c(And.of(absent("b"), present("a")))
        assert dedupe([first, second]) == [first.normalized()]


class TestDecompose:
    def test_consequent_conjunction_splits(self):
        parts = decompose(c(requires(present("a"), ["b", "c"])))
        assert [p.render() for p in parts] == ["a and not b -> invalid", "a and not c -> invalid"]

    def test_negated_conjunction_splits(self):
        parts = decompose(c(And.of(present("a"), Not(And.of(present("b"), present("c"))))))
        assert len(parts) == 2

    def test_disjunctive_trigger_stays(self):
        f = And.of(Or.of(present("a"), present("b")), absent("c"))
        assert len(decompose(c(f))) == 1

    def test_any_of_stays(self):
        assert len(decompose(c(any_of(["a", "b"])))) == 1

    def test_keeps_labels(self):
        parts = decompose(Constraint(requires(present("a"), ["b", "c"]), category="B6"))
        assert all(p.category == "B6" for p in parts)


class TestDomain:
    def test_literals_and_other_value(self):
        domain = build_domain([c(Leaf(Eq("type", "iDEAL")))])
        states = domain.states("type")
        assert states[0] is ABSENT
        assert "iDEAL" in states and "<other>" in states

    def test_bound_neighbours(self):
        domain = build_domain([c(Leaf(Cmp("amount", ">", 10)))])
        assert {9, 10, 11} <= set(domain.states("amount"))

    def test_length_samples(self):
        domain = build_domain([c(Leaf(Len("ref", ">", 2)))])
        assert {"x", "xx", "xxx"} <= set(domain.states("ref"))

    def test_spec_enums(self, payment_spec):
        domain = build_domain([c(present("amount.currency"))], spec=payment_spec)
        assert {"EUR", "USD"} <= set(domain.states("amount.currency"))

    def test_covers(self):
        domain = build_domain([c(present("a"))])
        with pytest.raises(DomainCoverageError):
            domain.covers(["a", "b"])


class TestEquivalence:
    def test_requires_equals_expanded_form(self):
        sugar = c(requires(Leaf(Eq("type", "iDEAL")), ["returnUrl"]))
        plain = c(And.of(Leaf(Eq("type", "iDEAL")), absent("returnUrl")))
        assert equivalent(sugar, plain, build_domain([sugar, plain]))

    def test_redundant_presence_is_absorbed(self):
        bare = c(Leaf(Cmp("amount.value", "<", 1)))
        guarded = c(And.of(present("amount.value"), Leaf(Cmp("amount.value", "<", 1))))
        assert equivalent(bare, guarded, build_domain([bare, guarded]))

    def test_parent_presence_is_not_implied(self):
        bare = c(Leaf(Cmp("amount.value", "<", 1)))
        nested = c(And.of(present("amount"), Leaf(Cmp("amount.value", "<", 1))))
        assert not equivalent(bare, nested, build_domain([bare, nested]))

    def test_membership_against_disjunction(self):
        member = c(Not(Leaf(InSet("channel", frozenset({"browser", "app"})))))
        chain = c(And.of(Not(Leaf(Eq("channel", "browser"))), Not(Leaf(Eq("channel", "app")))))
        assert equivalent(member, chain, build_domain([member, chain]))

    def test_different_bounds(self):
        a = c(Leaf(Cmp("n", ">", 70)))
        b = c(Leaf(Cmp("n", ">=", 70)))
        assert not equivalent(a, b, build_domain([a, b]))

    def test_partial_is_rejected(self):
        a = c(Leaf(Unparsed("x")))
        with pytest.raises(PartialConstraintError):
            equivalent(a, a, build_domain([]))

    def test_symmetry(self):
        a = c(any_of(["a", "b"]))
        b = c(exactly_one(["a", "b"]))
        domain = build_domain([a, b])
        assert equivalent(a, b, domain) == equivalent(b, a, domain)


class TestCombine:
    def test_drops_equivalent(self):
        code = [c(requires(present("a"), ["b"]))]
        doc = [c(And.of(absent("b"), present("a"))), c(any_of(["a", "c"]))]
        union = combine(code, doc)
        assert len(union) == 2
        assert union[0] is code[0]

    def test_partial_deduplicates_structurally(self):
        partial = c(And.of(Leaf(Unparsed("f()")), absent("b")))
        assert len(combine([partial], [partial])) == 1


# --------------------------------------------------------------------------
# Brute-force oracle: equivalence over the derived domain must agree with
# equivalence over a dense reference domain.

NUMERIC_PATHS = ("n",)
STRING_PATHS = ("s", "t")
STRING_LITERALS = ("x", "y", "z")
REFERENCE_STATES = {
    "n": (ABSENT,) + tuple(range(-1, 7)),
    "s": (ABSENT,) + STRING_LITERALS + ("w",),
    "t": (ABSENT,) + STRING_LITERALS + ("w",),
}


def random_atom(rng: random.Random):
    kind = rng.choice(("present", "cmp", "eq", "in"))
    if kind == "present":
        return Present(rng.choice(NUMERIC_PATHS + STRING_PATHS))
    if kind == "cmp":
        return Cmp(rng.choice(NUMERIC_PATHS), rng.choice(("<", "<=", ">", ">=", "==", "!=")), rng.randint(0, 4))
    path = rng.choice(STRING_PATHS)
    if kind == "eq":
        return Eq(path, rng.choice(STRING_LITERALS))
    return InSet(path, frozenset(rng.sample(STRING_LITERALS, rng.randint(1, 2))))


def random_formula(rng: random.Random, depth: int = 3):
    if depth == 0 or rng.random() < 0.3:
        return Leaf(random_atom(rng))
    kind = rng.choice(("and", "or", "not"))
    if kind == "not":
        return Not(random_formula(rng, depth - 1))
    children = tuple(random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(children) if kind == "and" else Or(children)


def rewrite(f, rng: random.Random):
    """A formula equivalent to ``f``, built with value-preserving rewrites."""
    if isinstance(f, Leaf):
        atom = f.atom
        if isinstance(atom, Cmp) and atom.op == "<" and rng.random() < 0.5:
            return And.of(present(atom.path), Not(Leaf(Cmp(atom.path, ">=", atom.bound))))
        if rng.random() < 0.2:
            return Not(Not(f))
        return f
    if isinstance(f, Not):
        inner = f.child
        if isinstance(inner, (And, Or)) and rng.random() < 0.5:
            dual = Or if isinstance(inner, And) else And
            return dual(tuple(rewrite(Not(child), rng) for child in inner.children))
        return Not(rewrite(inner, rng))
    children = [rewrite(child, rng) for child in f.children]
    rng.shuffle(children)
    return type(f)(tuple(children))


def reference_equivalent(f1, f2) -> bool:
    paths = sorted({p for f in (f1, f2) for p in referenced_paths(f)})
    for combo in itertools.product(*(REFERENCE_STATES[p] for p in paths)):
        assignment = Assignment(dict(zip(paths, combo)))
        if evaluate(f1, assignment) != evaluate(f2, assignment):
            return False
    return True


class TestEquivalenceOracle:
    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_reference_domain(self, seed):
        rng = random.Random(seed)
        agreed_equivalent = 0
        for _ in range(100):
            f1 = random_formula(rng)
            f2 = rewrite(f1, rng) if rng.random() < 0.5 else random_formula(rng)
            c1, c2 = c(f1), c(f2)
            domain = build_domain([c1, c2], extra_paths=sorted(referenced_paths(f1) | referenced_paths(f2)))
            expected = reference_equivalent(f1, f2)
            assert equivalent(c1, c2, domain) == expected, (render(normalize(f1)), render(normalize(f2)))
            agreed_equivalent += expected
        assert agreed_equivalent > 0

    @pytest.mark.parametrize("seed", range(5))
    def test_rewrites_are_equivalent(self, seed):
        rng = random.Random(1000 + seed)
        for _ in range(50):
            f = random_formula(rng)
            g = rewrite(f, rng)
            assert equivalent(c(f), c(g), build_domain([c(f), c(g)], extra_paths=sorted(referenced_paths(f))))

    @pytest.mark.parametrize("seed", range(5))
    def test_normalize_preserves_meaning(self, seed):
        rng = random.Random(2000 + seed)
        for _ in range(50):
            f = random_formula(rng)
            assert reference_equivalent(f, normalize(f))

    def test_explicit_domain(self):
        domain = Domain.from_states({"a": [1], "b": [1]})
        assert equivalent(c(any_of(["a", "b"])), c(And.of(absent("b"), absent("a"))), domain)


TARGET_PATHS = ("a", "b", "c")
TARGET_STATES = {path: (ABSENT, "v") for path in TARGET_PATHS}


def random_constraint(rng: random.Random) -> Constraint:
    if rng.random() < 0.7:
        targets = rng.sample(TARGET_PATHS, rng.randint(1, 3))
        return c(requires(random_formula(rng, 2), targets))
    return c(random_formula(rng))


def states_for(path):
    return TARGET_STATES.get(path) or REFERENCE_STATES[path]


class TestDecomposeProperty:
    @pytest.mark.parametrize("seed", range(5))
    def test_parts_cover_exactly_the_original(self, seed):
        rng = random.Random(3000 + seed)
        split = 0
        for _ in range(60):
            constraint = random_constraint(rng)
            parts = decompose(constraint)
            split += len(parts) > 1
            paths = sorted(referenced_paths(constraint.precondition))
            for combo in itertools.product(*(states_for(p) for p in paths)):
                point = Assignment(dict(zip(paths, combo)))
                whole = evaluate(constraint.precondition, point)
                assert whole == any(evaluate(p.precondition, point) for p in parts), constraint.render()
        assert split > 0
