"""
Text grammar for polynomials and monomial maps.

Polynomials::

    poly     := term (('+' | '-') term)*
    term     := [rational] factor*
    factor   := (atom | '(' poly ')') ['^' int]
    atom     := 'a' [int] | 'c' int | "c'" int | 's[' [int (',' int)*] ']' | 't[' name ']'
    rational := int ['/' posint]

Factors may be separated by whitespace or ``*``. A parenthesized group lets
data files keep a common denominator outside, e.g. ``1/2 (s[]^2 - s[1])``.
"""
import re
from fractions import Fraction
from math import factorial, prod
from typing import Dict, List, Optional, Sequence, Tuple

from utils.algebra import GradedPoly, Var, VarSpace, add, mul, power
from utils.exceptions import ParseError

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>\d+)
  | (?P<target>c'(?P<target_index>\d+))
  | (?P<chern>c(?P<chern_index>\d+))
  | (?P<lnclass>s\[\s*(?P<ln_index>\d+(?:\s*,\s*\d+)*)?\s*\])
  | (?P<marker>t\[(?P<marker_name>[^\]\s]+)\])
  | (?P<torus>a(?P<torus_index>\d*))
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    tokens: List[Tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(
                f"Unexpected character {text[pos]!r} at position {pos}",
                details={"text": text, "position": pos}
            )
        if match.group("space"):
            pass
        elif match.group("number"):
            tokens.append(("number", int(match.group("number")), pos))
        elif match.group("target"):
            tokens.append(("var", Var.target_chern(int(match.group("target_index"))), pos))
        elif match.group("chern"):
            tokens.append(("var", Var.chern(int(match.group("chern_index"))), pos))
        elif match.group("lnclass"):
            raw = match.group("ln_index")
            index = [int(x) for x in raw.split(",")] if raw else []
            tokens.append(("var", Var.landweber(index), pos))
        elif match.group("marker"):
            tokens.append(("var", Var.marker(match.group("marker_name")), pos))
        elif match.group("torus"):
            digits = match.group("torus_index")
            tokens.append(("var", Var.torus(int(digits) if digits else 1), pos))
        elif match.group("op"):
            tokens.append(("op", match.group("op"), pos))
        else:
            raise ParseError("Unrecognized token", details={"text": text, "position": pos})
        pos = match.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, space: VarSpace):
        self.text = text
        self.space = space
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> Optional[Tuple[str, object, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> Tuple[str, object, int]:
        token = self._peek()
        if token is None:
            raise ParseError("Unexpected end of input", details={"text": self.text})
        self.pos += 1
        return token

    def _error(self, message: str, token=None) -> ParseError:
        position = token[2] if token else len(self.text)
        return ParseError(message, details={"text": self.text, "position": position})

    def _expect(self, op: str) -> None:
        token = self._take()
        if token != ("op", op, token[2]):
            raise self._error(f"Expected {op!r}", token)

    def _at_op(self, *ops: str) -> bool:
        token = self._peek()
        return token is not None and token[0] == "op" and token[1] in ops

    def parse(self) -> GradedPoly:
        if not self.tokens:
            raise ParseError("Empty polynomial text", details={"text": self.text})
        result = self.poly()
        if self._peek() is not None:
            raise self._error("Trailing input", self._peek())
        return result

    def poly(self) -> GradedPoly:
        sign = 1
        if self._at_op("+", "-"):
            sign = -1 if self._take()[1] == "-" else 1
        result = self.term() * sign
        while self._at_op("+", "-"):
            sign = -1 if self._take()[1] == "-" else 1
            result = add(result, self.term() * sign)
        return result

    def _exponent(self) -> int:
        if not self._at_op("^"):
            return 1
        self._take()
        token = self._take()
        if token[0] != "number":
            raise self._error("Exponent must be a non-negative integer", token)
        return int(token[1])

    def term(self) -> GradedPoly:
        coefficient = Fraction(1)
        token = self._peek()
        if token is not None and token[0] == "number":
            self._take()
            coefficient = Fraction(int(token[1]))
            if self._at_op("/"):
                self._take()
                denominator = self._take()
                if denominator[0] != "number" or denominator[1] == 0:
                    raise self._error("Denominator must be a positive integer", denominator)
                coefficient /= int(denominator[1])
        elif token is None or not (token[0] == "var" or self._at_op("(")):
            raise self._error("Expected a term", token)
        result = GradedPoly.constant(self.space, coefficient)
        while True:
            if self._at_op("*"):
                self._take()
            token = self._peek()
            if token is None:
                break
            if token[0] == "var":
                self._take()
                var = token[1]
                if not self.space.admits(var):
                    raise self._error(f"Variable {var} is not allowed here", token)
                factor = GradedPoly.variable(self.space, var)
            elif self._at_op("("):
                self._take()
                factor = self.poly()
                self._expect(")")
            else:
                break
            result = mul(result, power(factor, self._exponent()))
        return result


def parse_poly(text: str, space: VarSpace, truncation: Optional[int] = None) -> GradedPoly:
    poly = _PolyParser(text, space).parse()
    return poly.truncate(truncation) if truncation is not None else poly


def _format_coefficient(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_poly(p: GradedPoly) -> str:
    """Canonical text in graded-lex order; round-trips through parse_poly."""
    items = p.items()
    if not items:
        return "0"
    torus = {v for v in p.variables() if v.kind == "a"}
    bare_a = torus == {Var.torus(1)}
    pieces: List[str] = []
    for i, (monomial, coefficient) in enumerate(items):
        factors = []
        for var, exponent in monomial:
            name = "a" if bare_a and var.kind == "a" else str(var)
            factors.append(name if exponent == 1 else f"{name}^{exponent}")
        magnitude = abs(coefficient)
        if not factors:
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = " ".join(factors)
        else:
            body = _format_coefficient(magnitude) + " " + " ".join(factors)
        if i == 0:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(("- " if coefficient < 0 else "+ ") + body)
    return " ".join(pieces)


def format_rational(value: Fraction) -> str:
    return _format_coefficient(Fraction(value))


def parse_rational(text: str) -> Fraction:
    match = re.fullmatch(r"\s*([-+]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if match is None or (match.group(2) is not None and int(match.group(2)) == 0):
        raise ParseError(f"Not an exact rational: {text!r}", details={"text": text})
    return Fraction(int(match.group(1)), int(match.group(2) or 1))


def parse_int_list(text: str, field: str = "values") -> List[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ParseError(f"{field} must be comma-separated integers", details={"field": field, "text": text}) from exc


_MAP_MONOMIAL = re.compile(r"^(?:\d+(?:/\d+)?)?\*?(?P<body>.*)$")
_MAP_FACTOR = re.compile(r"(?P<name>[A-Za-z]\w*)(?:\^(?P<exp>\d+))?")


def parse_monomial_map(text: str) -> Tuple[List[str], List[List[Dict[str, int]]]]:
    """Parse ``"x^2+y^2+x*z, x*y, z"`` into variable names and exponent maps.

    Coefficients are accepted and ignored.

    Returns:
        (variables sorted naturally, components as lists of {variable: exponent})
    """
    components: List[List[Dict[str, int]]] = []
    names = set()
    for raw_component in text.split(","):
        component_text = raw_component.strip()
        if not component_text:
            raise ParseError("Empty map component", details={"text": text})
        monomials: List[Dict[str, int]] = []
        for raw in re.split(r"(?<!\^)[+-]", component_text.replace(" ", "*").replace("**", "*")):
            chunk = raw.strip("*")
            if not chunk:
                continue
            body = _MAP_MONOMIAL.match(chunk).group("body").strip("*")
            exponents: Dict[str, int] = {}
            for factor in filter(None, body.split("*")):
                match = _MAP_FACTOR.fullmatch(factor)
                if match is None:
                    raise ParseError(f"Cannot read monomial factor {factor!r}", details={"text": text})
                exponent = int(match.group("exp") or 1)
                exponents[match.group("name")] = exponents.get(match.group("name"), 0) + exponent
                names.add(match.group("name"))
            if not exponents:
                raise ParseError("Constant terms make a map non-singular at the origin", details={"component": component_text})
            monomials.append(exponents)
        if not monomials:
            raise ParseError("Empty map component", details={"text": text})
        components.append(monomials)
    return sorted(names, key=_natural_key), components


def _natural_key(name: str) -> Sequence:
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


_NAME_TOKEN = re.compile(r"([A-Z]\d+)(?:\^(\d+))?")


def parse_singularity_name(name: str) -> List[Tuple[str, int]]:
    """Split ``"A1A1A2"`` or ``"A0^3"`` into [(type, multiplicity), ...], grouping repeats."""
    position = 0
    groups: List[Tuple[str, int]] = []
    for match in _NAME_TOKEN.finditer(name):
        if match.start() != position:
            break
        position = match.end()
        mono_type, exponent = match.group(1), int(match.group(2) or 1)
        if groups and groups[-1][0] == mono_type:
            groups[-1] = (mono_type, groups[-1][1] + exponent)
        else:
            groups.append((mono_type, exponent))
    if position != len(name) or not groups:
        raise ParseError(f"Not a singularity name: {name!r}", details={"name": name})
    return groups


def canonical_name(name: str) -> str:
    try:
        groups = parse_singularity_name(name)
    except ParseError:
        return name
    return "".join(t if k == 1 else f"{t}^{k}" for t, k in groups)


def expand_name(name: str) -> List[str]:
    """Ordered mono-types of a tuple, e.g. ``"A1^2A2"`` -> [A1, A1, A2]."""
    return [t for t, k in parse_singularity_name(name) for _ in range(k)]


def name_multiplicities(name: str) -> Tuple[int, int]:
    """(deg1, |Aut|) implied by a multi-singularity name."""
    groups = parse_singularity_name(name)
    return groups[0][1], prod(factorial(k) for _, k in groups)
