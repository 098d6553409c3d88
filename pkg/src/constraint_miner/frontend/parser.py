"""Recursive-descent parser for ``.mj`` compilation units (see GRAMMAR.md)."""

from pathlib import Path
from typing import List, Optional, Tuple

from ..exceptions import SourceSyntaxError, UnsupportedConstructError
from .lexer import MODIFIERS, Token, tokenize
from .nodes import (
    Assign,
    Binary,
    Block,
    Break,
    Call,
    ClassDecl,
    CompilationUnit,
    Continue,
    EnumDecl,
    Expr,
    ExprStmt,
    FieldAccess,
    FieldDecl,
    For,
    ForEach,
    If,
    Literal,
    LocalVar,
    MethodDecl,
    Name,
    New,
    Param,
    Return,
    Span,
    Stmt,
    Switch,
    SwitchCase,
    This,
    Throw,
    TypeRef,
    Unary,
)

_UNSUPPORTED_STATEMENTS = {
    "while": "while loop",
    "do": "do-while loop",
    "try": "try/catch",
    "catch": "try/catch",
    "finally": "try/catch",
    "synchronized": "synchronized block",
}

_COMPOUND_ASSIGN = {"+=": "+", "-=": "-", "*=": "*", "/=": "/"}

_BINARY_LEVELS: Tuple[Tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


class Parser:
    """Parser over the token list of one file."""

    def __init__(self, tokens: List[Token], filename: str = "<source>"):
        self.tokens = tokens
        self.filename = filename
        self.pos = 0

    # ------------------------------------------------------------------
    # token helpers

    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind != "EOF":
            self.pos += 1
        return token

    def check(self, text: str, offset: int = 0) -> bool:
        return self.peek(offset).is_(text)

    def accept(self, text: str) -> Optional[Token]:
        if self.check(text):
            return self.advance()
        return None

    def error(self, message: str, token: Optional[Token] = None) -> SourceSyntaxError:
        token = token or self.peek()
        return SourceSyntaxError(message, self.filename, token.line, token.column)

    def unsupported(self, construct: str, token: Optional[Token] = None) -> UnsupportedConstructError:
        token = token or self.peek()
        return UnsupportedConstructError(construct, self.filename, token.line, token.column)

    def expect(self, text: str) -> Token:
        token = self.peek()
        if not token.is_(text):
            found = "end of file" if token.kind == "EOF" else repr(token.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def expect_ident(self) -> Token:
        token = self.peek()
        if token.kind != "IDENT":
            found = "end of file" if token.kind == "EOF" else repr(token.text)
            raise self.error(f"expected an identifier, found {found}")
        return self.advance()

    @staticmethod
    def span(token: Token) -> Span:
        return Span(token.line, token.column)

    # ------------------------------------------------------------------
    # declarations

    def parse_unit(self) -> CompilationUnit:
        package = None
        imports: List[str] = []
        if self.accept("package"):
            package = self.qualified_name()
            self.expect(";")
        while self.accept("import"):
            name = self.qualified_name()
            if self.accept("."):
                self.expect("*")
                name += ".*"
            imports.append(name)
            self.expect(";")

        classes: List[ClassDecl] = []
        enums: List[EnumDecl] = []
        while self.peek().kind != "EOF":
            self.type_declaration(classes, enums)
        return CompilationUnit(
            filename=self.filename,
            package=package,
            imports=tuple(imports),
            classes=tuple(classes),
            enums=tuple(enums),
        )

    def qualified_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.check(".") and self.peek(1).kind == "IDENT":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def modifiers(self) -> Tuple[str, ...]:
        found = []
        while True:
            token = self.peek()
            if token.kind == "KEYWORD" and token.text in MODIFIERS:
                found.append(self.advance().text)
            elif token.is_("@"):
                self.advance()
                self.qualified_name()
                if self.check("("):
                    raise self.unsupported("annotation arguments")
            else:
                return tuple(found)

    def type_declaration(self, classes: List[ClassDecl], enums: List[EnumDecl]) -> None:
        modifiers = self.modifiers()
        token = self.peek()
        if token.is_("class"):
            classes.append(self.class_declaration(modifiers, classes, enums))
        elif token.is_("enum"):
            enums.append(self.enum_declaration(modifiers))
        elif token.is_("interface"):
            raise self.unsupported("interface declaration")
        else:
            raise self.error(f"expected a class or enum declaration, found {token.text!r}")

    def enum_declaration(self, modifiers: Tuple[str, ...]) -> EnumDecl:
        start = self.expect("enum")
        name = self.expect_ident().text
        self.expect("{")
        constants: List[str] = []
        while not self.check("}") and not self.check(";"):
            constants.append(self.expect_ident().text)
            if self.check("("):
                raise self.unsupported("enum constructor arguments")
            if not self.accept(","):
                break
        if self.accept(";") and not self.check("}"):
            raise self.unsupported("enum members")
        self.expect("}")
        return EnumDecl(name=name, constants=tuple(constants), modifiers=modifiers, span=self.span(start))

    def class_declaration(
        self, modifiers: Tuple[str, ...], classes: List[ClassDecl], enums: List[EnumDecl]
    ) -> ClassDecl:
        start = self.expect("class")
        name = self.expect_ident().text
        superclass = None
        if self.accept("extends"):
            superclass = self.type_ref()
        if self.accept("implements"):
            self.type_ref()
            while self.accept(","):
                self.type_ref()
        self.expect("{")

        fields: List[FieldDecl] = []
        methods: List[MethodDecl] = []
        while not self.check("}"):
            if self.peek().kind == "EOF":
                raise self.error(f"unterminated class {name}")
            member_modifiers = self.modifiers()
            if self.check("class"):
                classes.append(self.class_declaration(member_modifiers, classes, enums))
                continue
            if self.check("enum"):
                enums.append(self.enum_declaration(member_modifiers))
                continue
            if self.check("{"):
                raise self.unsupported("initializer block")
            member_start = self.peek()
            if self.peek().kind == "IDENT" and self.peek().text == name and self.check("(", 1):
                # constructor
                self.advance()
                methods.append(self.method_rest(name, TypeRef("void"), member_modifiers, member_start))
                continue
            member_type = self.return_type()
            member_name = self.expect_ident().text
            if self.check("("):
                methods.append(self.method_rest(member_name, member_type, member_modifiers, member_start))
            else:
                fields.extend(self.field_rest(member_type, member_name, member_modifiers, member_start))
        self.expect("}")
        return ClassDecl(
            name=name,
            fields=tuple(fields),
            methods=tuple(methods),
            superclass=superclass,
            modifiers=modifiers,
            span=self.span(start),
        )

    def field_rest(
        self, field_type: TypeRef, name: str, modifiers: Tuple[str, ...], start: Token
    ) -> List[FieldDecl]:
        declared = []
        while True:
            init = self.expression() if self.accept("=") else None
            declared.append(FieldDecl(field_type, name, init, modifiers, self.span(start)))
            if not self.accept(","):
                break
            start = self.peek()
            name = self.expect_ident().text
        self.expect(";")
        return declared

    def method_rest(
        self, name: str, return_type: TypeRef, modifiers: Tuple[str, ...], start: Token
    ) -> MethodDecl:
        self.expect("(")
        params: List[Param] = []
        if not self.check(")"):
            while True:
                self.modifiers()
                param_start = self.peek()
                param_type = self.type_ref()
                params.append(Param(param_type, self.expect_ident().text, self.span(param_start)))
                if not self.accept(","):
                    break
        self.expect(")")
        if self.accept("throws"):
            self.type_ref()
            while self.accept(","):
                self.type_ref()
        if self.accept(";"):
            body = Block((), self.span(start))
        else:
            body = self.block()
        return MethodDecl(name, tuple(params), return_type, body, modifiers, self.span(start))

    def return_type(self) -> TypeRef:
        if self.accept("void"):
            return TypeRef("void")
        return self.type_ref()

    def type_ref(self, allow_diamond: bool = False) -> TypeRef:
        token = self.peek()
        if token.is_("?"):
            self.advance()
            return TypeRef("?")
        name = self.qualified_name()
        args: Tuple[TypeRef, ...] = ()
        if self.accept("<"):
            if allow_diamond and self.accept(">"):
                args = ()
            else:
                parsed = [self.type_ref()]
                while self.accept(","):
                    parsed.append(self.type_ref())
                self.expect(">")
                args = tuple(parsed)
        dims = 0
        while self.check("[") and self.check("]", 1):
            self.advance()
            self.advance()
            dims += 1
        return TypeRef(name, args, dims)

    # ------------------------------------------------------------------
    # statements

    def block(self) -> Block:
        start = self.expect("{")
        body: List[Stmt] = []
        while not self.check("}"):
            if self.peek().kind == "EOF":
                raise self.error("unterminated block", start)
            body.append(self.statement())
        self.expect("}")
        return Block(tuple(body), self.span(start))

    def statement(self) -> Stmt:
        token = self.peek()
        if token.is_("{"):
            return self.block()
        if token.is_(";"):
            self.advance()
            return Block((), self.span(token))
        if token.kind == "KEYWORD":
            if token.text in _UNSUPPORTED_STATEMENTS:
                raise self.unsupported(_UNSUPPORTED_STATEMENTS[token.text])
            if token.text == "if":
                return self.if_statement()
            if token.text == "switch":
                return self.switch_statement()
            if token.text == "for":
                return self.for_statement()
            if token.text == "return":
                self.advance()
                value = None if self.check(";") else self.expression()
                self.expect(";")
                return Return(value, self.span(token))
            if token.text == "throw":
                self.advance()
                value = self.expression()
                self.expect(";")
                return Throw(value, self.span(token))
            if token.text == "break":
                self.advance()
                self.expect(";")
                return Break(self.span(token))
            if token.text == "continue":
                self.advance()
                self.expect(";")
                return Continue(self.span(token))
            if token.text == "final":
                self.advance()
                return self.local_declaration()
            if token.text in ("class", "enum"):
                raise self.unsupported("local type declaration")
        if self.looks_like_declaration():
            return self.local_declaration()
        statement = self.simple_statement()
        self.expect(";")
        return statement

    def looks_like_declaration(self) -> bool:
        if self.peek().kind != "IDENT":
            return False
        saved = self.pos
        try:
            self.type_ref()
            return self.peek().kind == "IDENT" and (
                self.check("=", 1) or self.check(";", 1) or self.check(",", 1) or self.check(":", 1)
            )
        except SourceSyntaxError:
            return False
        finally:
            self.pos = saved

    def local_declaration(self, terminated: bool = True) -> Stmt:
        start = self.peek()
        var_type = self.type_ref()
        name = self.expect_ident().text
        init = self.expression() if self.accept("=") else None
        if self.check(","):
            raise self.unsupported("several variables in one declaration")
        if terminated:
            self.expect(";")
        return LocalVar(var_type, name, init, self.span(start))

    def simple_statement(self) -> Stmt:
        """Assignment, increment or expression statement, without the ``;``."""
        start = self.peek()
        target = self.expression()
        token = self.peek()
        if token.is_("="):
            self.advance()
            return Assign(target, self.expression(), self.span(start))
        if token.kind == "OP" and token.text in _COMPOUND_ASSIGN:
            self.advance()
            value = Binary(_COMPOUND_ASSIGN[token.text], target, self.expression(), self.span(start))
            return Assign(target, value, self.span(start))
        if token.is_("++") or token.is_("--"):
            self.advance()
            op = "+" if token.text == "++" else "-"
            return Assign(target, Binary(op, target, Literal(1, self.span(token)), self.span(start)), self.span(start))
        return ExprStmt(target, self.span(start))

    def if_statement(self) -> If:
        start = self.expect("if")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.statement()
        orelse = self.statement() if self.accept("else") else None
        return If(cond, then, orelse, self.span(start))

    def switch_statement(self) -> Switch:
        start = self.expect("switch")
        self.expect("(")
        subject = self.expression()
        self.expect(")")
        self.expect("{")
        cases: List[SwitchCase] = []
        pending: List[Expr] = []
        pending_token: Optional[Token] = None
        while not self.check("}"):
            token = self.peek()
            if token.is_("case"):
                self.advance()
                pending.append(self.expression())
                while self.accept(","):
                    pending.append(self.expression())
            elif token.is_("default"):
                self.advance()
                if pending:
                    raise self.error("'default' cannot share a body with case labels", token)
            else:
                raise self.error(f"expected 'case' or 'default', found {token.text!r}")
            if self.check("->"):
                raise self.unsupported("arrow switch case")
            self.expect(":")
            pending_token = pending_token or token
            body: List[Stmt] = []
            while not (self.check("case") or self.check("default") or self.check("}")):
                if self.peek().kind == "EOF":
                    raise self.error("unterminated switch", start)
                body.append(self.statement())
            if not body and token.is_("case") and self.check("case"):
                # consecutive labels share the next body
                continue
            cases.append(SwitchCase(tuple(pending), tuple(body), self.span(pending_token)))
            pending, pending_token = [], None
        self.expect("}")
        return Switch(subject, tuple(cases), self.span(start))

    def for_statement(self) -> Stmt:
        start = self.expect("for")
        self.expect("(")
        self.accept("final")
        # for (x : items)
        if self.peek().kind == "IDENT" and self.check(":", 1):
            var = self.advance().text
            self.advance()
            return self.for_each_rest(None, var, start)
        # for (Type x : items)
        if self.looks_like_declaration():
            saved = self.pos
            var_type = self.type_ref()
            var = self.expect_ident().text
            if self.accept(":"):
                return self.for_each_rest(var_type, var, start)
            self.pos = saved
            init: Optional[Stmt] = self.local_declaration(terminated=False)
        elif self.check(";"):
            init = None
        else:
            init = self.simple_statement()
        self.expect(";")
        cond = None if self.check(";") else self.expression()
        self.expect(";")
        update: List[Stmt] = []
        if not self.check(")"):
            update.append(self.simple_statement())
            while self.accept(","):
                update.append(self.simple_statement())
        self.expect(")")
        body = self.statement()
        return For(init, cond, tuple(update), body, self.span(start))

    def for_each_rest(self, var_type: Optional[TypeRef], var: str, start: Token) -> ForEach:
        iterable = self.expression()
        self.expect(")")
        body = self.statement()
        return ForEach(var_type, var, iterable, body, self.span(start))

    # ------------------------------------------------------------------
    # expressions

    def expression(self) -> Expr:
        expr = self.binary(0)
        if self.check("?"):
            raise self.unsupported("conditional expression")
        if self.check("->"):
            raise self.unsupported("lambda expression")
        return expr

    def binary(self, level: int) -> Expr:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        while True:
            token = self.peek()
            if token.is_("instanceof"):
                raise self.unsupported("instanceof")
            if token.kind == "OP" and token.text in _BINARY_LEVELS[level]:
                self.advance()
                right = self.binary(level + 1)
                left = Binary(token.text, left, right, left.span)
            else:
                return left

    def unary(self) -> Expr:
        token = self.peek()
        if token.is_("!") or token.is_("-"):
            self.advance()
            return Unary(token.text, self.unary(), self.span(token))
        if token.is_("++") or token.is_("--"):
            raise self.unsupported("prefix increment")
        return self.postfix()

    def postfix(self) -> Expr:
        expr = self.primary()
        while True:
            if self.accept("."):
                name_token = self.expect_ident()
                if self.check("("):
                    expr = Call(expr, name_token.text, self.arguments(), expr.span)
                else:
                    expr = FieldAccess(expr, name_token.text, expr.span)
            elif self.check("::"):
                raise self.unsupported("method reference")
            elif self.check("["):
                raise self.unsupported("array indexing")
            else:
                return expr

    def arguments(self) -> Tuple[Expr, ...]:
        self.expect("(")
        args: List[Expr] = []
        if not self.check(")"):
            args.append(self.expression())
            while self.accept(","):
                args.append(self.expression())
        self.expect(")")
        return tuple(args)

    def _lambda_ahead(self) -> bool:
        """True when a parenthesised group is followed by ``->``."""
        depth = 0
        offset = 0
        while True:
            token = self.peek(offset)
            if token.kind == "EOF":
                return False
            if token.is_("("):
                depth += 1
            elif token.is_(")"):
                depth -= 1
                if depth == 0:
                    return self.check("->", offset + 1)
            offset += 1

    def primary(self) -> Expr:
        token = self.peek()
        span = self.span(token)
        if token.kind in ("NUMBER", "STRING", "CHAR"):
            self.advance()
            value = token.value if token.kind != "CHAR" else token.text[1:-1]
            return Literal(value, span)
        if token.kind == "KEYWORD":
            if token.text in ("true", "false"):
                self.advance()
                return Literal(token.text == "true", span)
            if token.text == "null":
                self.advance()
                return Literal(None, span)
            if token.text == "this":
                self.advance()
                return This(span)
            if token.text == "new":
                self.advance()
                new_type = self.type_ref(allow_diamond=True)
                if self.check("["):
                    raise self.unsupported("array creation")
                args = self.arguments()
                if self.check("{"):
                    raise self.unsupported("anonymous class")
                return New(new_type, args, span)
        if token.is_("("):
            if self._lambda_ahead():
                raise self.unsupported("lambda expression")
            self.advance()
            inner = self.expression()
            self.expect(")")
            return inner
        if token.kind == "IDENT":
            if self.check("->", 1):
                raise self.unsupported("lambda expression")
            self.advance()
            if self.check("("):
                return Call(None, token.text, self.arguments(), span)
            return Name(token.text, span)
        found = "end of file" if token.kind == "EOF" else repr(token.text)
        raise self.error(f"expected an expression, found {found}")


def parse_unit(source: str, filename: str = "<source>") -> CompilationUnit:
    """Parse one compilation unit."""
    return Parser(tokenize(source, filename), filename).parse_unit()


def parse_expression(source: str, filename: str = "<expr>") -> Expr:
    parser = Parser(tokenize(source, filename), filename)
    expr = parser.expression()
    if parser.peek().kind != "EOF":
        raise parser.error(f"unexpected {parser.peek().text!r} after expression")
    return expr


def parse_file(path: Path) -> CompilationUnit:
    path = Path(path)
    return parse_unit(path.read_text(encoding="utf-8"), str(path))
