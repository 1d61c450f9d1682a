"""
@ai-metadata {
    "domain": "text-codecs",
    "description": "Parsers for group specs, elements, scalars and group-ring vectors written as text",
    "dependencies": ["groups.py", "algebra.py", "errors.py"],
    "invariants": [
        "Every syntax error reports the offending position",
        "Whitespace never changes the parsed value"
    ]
}
"""

import re
import logging
from fractions import Fraction
from typing import Any, List, Mapping, Optional, Sequence, Tuple, Union

from lplab_py.core.algebra import (
    ExactScalar,
    GroupVector,
    Scalar,
    ScalarMode,
    VectorTuple,
    as_scalar,
)
from lplab_py.core.errors import ConfigError, GroupSpecSyntaxError, ScalarModeError
from lplab_py.core.groups import FREE_LETTERS, GroupElement, GroupKind, GroupSpec

logger = logging.getLogger(__name__)

_NUMBER = r"(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+(?:/\d+)?)"
_SCALAR_PATTERN = re.compile(
    rf"^(?P<re>[+-]?{_NUMBER})?(?:(?P<isign>[+-])?(?P<im>{_NUMBER})?\*?(?P<i>i))?$")
_LETTER_PATTERN = re.compile(r"([a-z])(?:\^([+-]?\d+))?")
_FACTOR_PATTERN = re.compile(r"(Z)(?:\^(\d+))?|(F)_?(\d+)|(C)_?(\d+)")
_TERM_PATTERN = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coeff>\([^()]*\)|[^\s\[\]*+-][^\s\[\]*]*)\s*\*?\s*)?\[(?P<element>[^\[\]]*)\]\s*")

_PRODUCT_SEPARATORS = ("x", "×")


def _compact(text: str) -> Tuple[str, List[int]]:
    """Drop whitespace, remembering the original position of each kept character."""
    kept, positions = [], []
    for i, ch in enumerate(text):
        if not ch.isspace():
            kept.append(ch)
            positions.append(i)
    return "".join(kept), positions


def parse_group(text: str) -> GroupSpec:
    """
    Parse a group spec such as "Z", "Z^3", "F2", "C6" or "Z^2 x C3".

    Args:
        text: The group spec string.

    Returns:
        The parsed GroupSpec; several factors give a direct product.
    """
    compact, positions = _compact(text)
    if not compact:
        raise GroupSpecSyntaxError("empty group spec", text, 0)
    factors: List[GroupSpec] = []
    pos = 0
    while True:
        match = _FACTOR_PATTERN.match(compact, pos)
        if not match:
            where = positions[pos] if pos < len(positions) else len(text)
            raise GroupSpecSyntaxError("expected Z, Z^d, F<k> or C<m>", text, where)
        if match.group(1):
            rank = int(match.group(2)) if match.group(2) else 1
            factors.append(GroupSpec.free_abelian(rank) if rank > 0 else _fail(text, positions[pos], "Z^0"))
        elif match.group(3):
            rank = int(match.group(4))
            if rank < 1:
                _fail(text, positions[pos], "F0")
            factors.append(GroupSpec.free(rank))
        else:
            order = int(match.group(6))
            if order < 1:
                _fail(text, positions[pos], "C0")
            factors.append(GroupSpec.cyclic(order))
        pos = match.end()
        if pos == len(compact):
            break
        if compact[pos] not in _PRODUCT_SEPARATORS:
            raise GroupSpecSyntaxError(f"unexpected {compact[pos]!r}", text, positions[pos])
        pos += 1
        if pos == len(compact):
            raise GroupSpecSyntaxError("missing factor after product sign", text, len(text))
    return factors[0] if len(factors) == 1 else GroupSpec.product(*factors)


def _fail(text: str, position: int, token: str):
    raise GroupSpecSyntaxError(f"{token} is not a valid factor", text, position)


def parse_element(group: GroupSpec, text: str) -> GroupElement:
    """Parse an element string in the group's canonical notation."""
    if group.kind == GroupKind.PRODUCT:
        stripped = text.strip()
        if stripped == "e":
            return group.identity()
        pieces = stripped.split(";")
        if len(pieces) != len(group.factors):
            raise GroupSpecSyntaxError(
                f"expected {len(group.factors)} ';'-separated components, got {len(pieces)}", text, 0)
        return tuple(parse_element(f, piece) for f, piece in zip(group.factors, pieces))

    compact, positions = _compact(text)
    if not compact:
        raise GroupSpecSyntaxError("empty element", text, 0)
    if compact == "e":
        return group.identity()

    if group.kind == GroupKind.FREE_ABELIAN:
        body = compact[1:-1] if compact.startswith("(") and compact.endswith(")") else compact
        parts = body.split(",")
        if len(parts) != group.rank:
            raise GroupSpecSyntaxError(f"expected {group.rank} coordinates", text, 0)
        coords = []
        offset = 1 if body is not compact else 0
        for part in parts:
            if not re.fullmatch(r"[+-]?\d+", part):
                raise GroupSpecSyntaxError(f"bad coordinate {part!r}", text, positions[min(offset, len(positions) - 1)])
            coords.append(int(part))
            offset += len(part) + 1
        return tuple(coords)

    if group.kind == GroupKind.CYCLIC:
        if not re.fullmatch(r"[+-]?\d+", compact):
            raise GroupSpecSyntaxError("expected an integer residue", text, positions[0])
        return int(compact) % group.rank

    # free group word
    word: GroupElement = ()
    pos = 0
    while pos < len(compact):
        if compact[pos] in "*.":
            pos += 1
            continue
        match = _LETTER_PATTERN.match(compact, pos)
        if not match:
            raise GroupSpecSyntaxError("expected a generator letter", text, positions[pos])
        letter = match.group(1)
        index = FREE_LETTERS.find(letter)
        if index < 0 or index >= group.rank:
            raise GroupSpecSyntaxError(f"{letter!r} is not a generator of {group.name}", text, positions[pos])
        exponent = int(match.group(2)) if match.group(2) else 1
        word = group.mul(word, group.power((index + 1,), exponent))
        pos = match.end()
    return word


def parse_scalar(text: Union[str, int, float, complex, Fraction], mode: Optional[ScalarMode] = None) -> Scalar:
    """
    Parse "1", "-1/2", "i", "3/5+4/5i" (Exact) or "0.6+0.8i" (Float).

    Args:
        text: Scalar text, or an already numeric value.
        mode: Force a mode; decimal text in Exact mode is an error.

    Returns:
        An ExactScalar or a complex.
    """
    if not isinstance(text, str):
        inferred = ScalarMode.FLOAT if isinstance(text, (float, complex)) else ScalarMode.EXACT
        return as_scalar(text, mode or inferred)
    compact, _ = _compact(text)
    if compact.startswith("(") and compact.endswith(")"):
        compact = compact[1:-1]
    match = _SCALAR_PATTERN.match(compact)
    if not compact or not match or not (match.group("re") or match.group("i")):
        raise GroupSpecSyntaxError("malformed scalar", text, 0)
    re_text, isign, im_text, has_i = match.group("re"), match.group("isign"), match.group("im"), match.group("i")
    if has_i and re_text and not isign:
        if im_text:
            raise GroupSpecSyntaxError("missing sign before the imaginary part", text, 0)
        re_text, im_text, isign = None, re_text, None
    if has_i and not im_text:
        im_text = "1"
    is_float = any(c in compact for c in ".eE")
    inferred = ScalarMode.FLOAT if is_float else ScalarMode.EXACT
    if mode == ScalarMode.EXACT and is_float:
        raise ScalarModeError(f"decimal scalar {text!r} in Exact mode")
    mode = mode or inferred

    def number(token: Optional[str], sign: Optional[str] = None):
        if token is None:
            return 0
        value = float(token) if is_float else Fraction(token)
        return -value if sign == "-" else value

    re_value = number(re_text)
    im_value = number(im_text, isign) if has_i else 0
    if mode == ScalarMode.FLOAT:
        return complex(float(re_value), float(im_value))
    return ExactScalar(re_value, im_value)


def parse_vector(group: GroupSpec, text: str, mode: Optional[ScalarMode] = None) -> GroupVector:
    """
    Parse a group-ring vector written as a signed sum of terms coeff*[element].

    Examples: "[e] - [a]", "2*[1,0] + (1/2+i)*[0,1]", "0".
    """
    stripped = text.strip()
    if stripped == "0":
        return GroupVector.zero(group, mode or ScalarMode.EXACT)
    pos = 0
    terms = []
    while pos < len(text):
        match = _TERM_PATTERN.match(text, pos)
        if not match or match.end() == pos:
            raise GroupSpecSyntaxError("expected a term coeff*[element]", text, pos)
        if terms and not match.group("sign"):
            raise GroupSpecSyntaxError("terms must be joined by + or -", text, pos)
        coeff_text = match.group("coeff")
        coeff = parse_scalar(coeff_text, mode) if coeff_text else None
        element = parse_element(group, match.group("element"))
        terms.append((element, coeff, match.group("sign")))
        pos = match.end()
    if not terms:
        raise GroupSpecSyntaxError("empty vector", text, 0)
    inferred = mode or (ScalarMode.FLOAT if any(isinstance(c, complex) for _, c, _ in terms)
                        else ScalarMode.EXACT)
    resolved = []
    for element, coeff, sign in terms:
        value = as_scalar(1 if coeff is None else coeff, inferred)
        resolved.append((element, -value if sign == "-" else value))
    return GroupVector.from_terms(group, resolved, inferred)


def vector_from_mapping(data: Mapping[str, Any], group: Optional[GroupSpec] = None) -> Union[GroupVector, VectorTuple]:
    """
    Decode a vector document.

    Accepted keys: "group", "mode", and either "vector" (text), "terms"
    (mapping element -> coefficient) or "components" (list of texts).
    """
    if group is None:
        if "group" not in data:
            raise ConfigError("vector document needs a 'group'")
        group = parse_group(str(data["group"]))
    mode = ScalarMode(data["mode"]) if data.get("mode") else None
    if "components" in data:
        parts = [parse_vector(group, str(t), mode) for t in data["components"]]
        if not parts:
            raise ConfigError("'components' must not be empty")
        return VectorTuple(group, tuple(parts), parts[0].mode)
    if "vector" in data:
        return parse_vector(group, str(data["vector"]), mode)
    if "terms" in data:
        terms = [(parse_element(group, str(k)), parse_scalar(v, mode)) for k, v in data["terms"].items()]
        inferred = mode or (ScalarMode.FLOAT if any(isinstance(c, complex) for _, c in terms) else ScalarMode.EXACT)
        return GroupVector.from_terms(group, terms, inferred)
    raise ConfigError("vector document needs 'vector', 'terms' or 'components'")


def parse_elements(group: GroupSpec, texts: Sequence[str]) -> List[GroupElement]:
    return [parse_element(group, t) for t in texts]


def parse_number_list(text: str) -> List[float]:
    """Parse "0,1" or "0.5, 1, 2" into floats."""
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    try:
        return [float(t) for t in items]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def parse_int_list(text: str) -> List[int]:
    """Parse "4,8,16" or a range "1..6" into integers."""
    text = text.strip()
    ranged = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text)
    if ranged:
        lo, hi = int(ranged.group(1)), int(ranged.group(2))
        return list(range(lo, hi + 1))
    items = [t for t in re.split(r"[,\s]+", text) if t]
    try:
        return [int(t) for t in items]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of integers, got {text!r}") from exc
