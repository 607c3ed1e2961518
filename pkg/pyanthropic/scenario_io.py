# -*- coding: utf-8 -*-
"""
Line-oriented scenario documents: parse and serialize.

A document looks like this::

    scenario sleeping beauty
    rule fnc                       # optional
    refclass wakenings             # optional

    [hypothesis] name=Heads prior=1/2
    [hypothesis] name=Tails prior=1/2

    [class] name=wakenings
    count Heads = 1
    count Tails = 2

    [evidence]
    count Heads = 1
    count Tails = 2
    epsilon Heads = 10^-12
    epsilon Tails = 10^-12

Numbers are integers, fractions a/b, decimals (read exactly) or powers of
ten 10^k (read as Magnitude).
"""

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional, Union

from pyanthropic.errors import (
    DomainError,
    InconsistentScenarioError,
    ScenarioSemanticError,
    ScenarioSyntaxError,
)
from pyanthropic.inference import RULES, EvidenceSet, Hypothesis, ReferenceClass, Scenario, Value
from pyanthropic.numerics import Magnitude, is_exact, to_float

logger = logging.getLogger(__name__)

LITERAL_REGEXES = {
    "power": r"10\^[+-]?[0-9]+",
    "fraction": r"[0-9]+/[0-9]+",
    "exp": r"([0-9]+\.?[0-9]*|\.[0-9]+)[eE][+-]?[0-9]+",
    "decimal": r"[0-9]+\.[0-9]*|\.[0-9]+",
    "integer": r"[0-9]+",
}

BLOCKS = {
    "[hypothesis]": ("name", "prior"),
    "[class]": ("name", "contains_evidence"),
    "[evidence]": (),
}

ROW = re.compile(r"^(?P<kind>count|epsilon)\s+(?P<hyp>[^\s=]+)\s*=\s*(?P<num>\S+)\s*$")
TOKEN = re.compile(r"\S+")
NAME = re.compile(r"[^\s=#\[\]]+")

ScenarioDocument = NamedTuple(
    "scenario_document",
    [("scenario", Scenario), ("rule", Optional[str]), ("class_name", Optional[str])],
)

###############################################################################


def parse_number(text: str) -> Value:
    """
    Parse a number literal.

    Returns int, Fraction (fractions, decimals and e-notation, all exact) or
    Magnitude (10^k). Raises DomainError for anything else.
    """
    text = text.strip()
    kind = [k for k, rx in LITERAL_REGEXES.items() if re.fullmatch(rx, text)]
    if not kind:
        raise DomainError(f"invalid number '{text}'")
    if kind[0] == "power":
        return Magnitude.power10(int(text[3:]))
    if kind[0] == "integer":
        return int(text)
    if kind[0] == "fraction":
        num, den = text.split("/")
        if int(den) == 0:
            raise DomainError(f"zero denominator in '{text}'")
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_number(x: Value) -> str:
    """Inverse of parse_number for values it can produce."""
    if isinstance(x, Magnitude):
        if x.is_zero():
            return "0"
        if not x.log10.is_integer():
            raise DomainError(f"{x!r} is not an integer power of ten")
        return f"10^{int(x.log10)}"
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise DomainError(f"cannot write {type(x).__name__} value {x!r} exactly")
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


###############################################################################


class _Block(object):
    def __init__(self, kind: str, line: int, fields: dict):
        self.kind = kind
        self.line = line
        self.fields = fields
        self.rows = []  # (kind, hypothesis, value, line)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _number(text: str, line: int, column: int) -> Value:
    try:
        return parse_number(text)
    except DomainError as e:
        raise ScenarioSyntaxError(str(e), line, column) from e


def _parse_fields(kind: str, content: str, start: int, line: int) -> dict:
    fields = {}
    for m in TOKEN.finditer(content, start):
        col = m.start() + 1
        key, sep, value = m.group().partition("=")
        if not sep or not value:
            raise ScenarioSyntaxError(f"expected key=value, got '{m.group()}'", line, col)
        if key not in BLOCKS[kind]:
            raise ScenarioSyntaxError(f"unknown key '{key}' in {kind}", line, col)
        if key in fields:
            raise ScenarioSyntaxError(f"duplicate key '{key}'", line, col)
        if key == "name" and not NAME.fullmatch(value):
            raise ScenarioSyntaxError(f"invalid name '{value}'", line, col + len(key) + 1)
        fields[key] = (value, col + len(key) + 1)
    return fields


def _tokenize(text: str) -> tuple[dict, list[_Block]]:
    header, blocks = {}, []
    for i, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        first = TOKEN.search(content)
        word, col = first.group(), first.start() + 1

        if "scenario" not in header:
            if word != "scenario" or not content[first.end() :].strip():
                raise ScenarioSyntaxError("document must start with 'scenario <name>'", i, col)
            header["scenario"] = (content[first.end() :].strip(), i)
            continue

        if word in ("rule", "refclass"):
            if blocks:
                raise ScenarioSyntaxError(f"'{word}' must come before the first block", i, col)
            values = content[first.end() :].split()
            if len(values) != 1:
                raise ScenarioSyntaxError(f"'{word}' takes exactly one value", i, col)
            if word in header:
                raise ScenarioSyntaxError(f"duplicate '{word}' line", i, col)
            if word == "rule" and values[0] not in RULES:
                vcol = content.index(values[0], first.end()) + 1
                raise ScenarioSyntaxError(f"unknown rule '{values[0]}', use one of {RULES}", i, vcol)
            header[word] = (values[0], i)
        elif word in BLOCKS:
            blocks.append(_Block(word, i, _parse_fields(word, content, first.end(), i)))
        elif word in ("count", "epsilon"):
            m = ROW.match(content.strip())
            if m is None:
                raise ScenarioSyntaxError(f"expected '{word} <hypothesis> = <number>'", i, col)
            if not blocks or blocks[-1].kind == "[hypothesis]":
                raise ScenarioSyntaxError(f"'{word}' row outside a [class] or [evidence] block", i, col)
            if word == "epsilon" and blocks[-1].kind != "[evidence]":
                raise ScenarioSyntaxError("epsilon rows belong to the [evidence] block", i, col)
            offset = len(content) - len(content.lstrip())
            value = _number(m.group("num"), i, offset + m.start("num") + 1)
            blocks[-1].rows.append((word, m.group("hyp"), value, i))
        else:
            raise ScenarioSyntaxError(f"unknown keyword '{word}'", i, col)

    if "scenario" not in header:
        raise ScenarioSyntaxError("empty document", 1)
    return header, blocks


###############################################################################


def _hypotheses(blocks: list[_Block]) -> tuple[list[Hypothesis], int]:
    hyps, seen = [], set()
    hyp_blocks = [b for b in blocks if b.kind == "[hypothesis]"]
    if not hyp_blocks:
        raise ScenarioSemanticError("document has no [hypothesis] block", 1)
    for b in hyp_blocks:
        for key in ("name", "prior"):
            if key not in b.fields:
                raise ScenarioSyntaxError(f"[hypothesis] needs {key}=", b.line)
        name = b.fields["name"][0]
        if name in seen:
            raise ScenarioSemanticError(f"duplicate hypothesis '{name}'", b.line)
        seen.add(name)
        value, col = b.fields["prior"]
        hyps.append(Hypothesis(name, _number(value, b.line, col)))

    line = hyp_blocks[0].line
    priors = [h.prior for h in hyps]
    if all(is_exact(p) for p in priors):
        total = sum(Fraction(p) for p in priors)
        if total != 1:
            raise ScenarioSemanticError(f"[hypothesis] priors sum to {total}, not 1", line)
    elif abs(sum(to_float(p) for p in priors) - 1.0) > 1e-12:
        raise ScenarioSemanticError("[hypothesis] priors do not sum to 1 within 1e-12", line)
    return hyps, line


def _rows_to_mapping(b: _Block, kind: str, names: list[str], what: str, required: bool) -> Optional[dict]:
    mapping = {}
    for row_kind, hyp, value, line in b.rows:
        if row_kind != kind:
            continue
        if hyp not in names:
            raise ScenarioSemanticError(f"unknown hypothesis '{hyp}' in {what}", line)
        if hyp in mapping:
            raise ScenarioSemanticError(f"duplicate {kind} row for '{hyp}' in {what}", line)
        mapping[hyp] = value
    if not mapping and not required:
        return None
    missing = [h for h in names if h not in mapping]
    if missing:
        raise ScenarioSemanticError(f"{what} has no {kind} for hypothesis '{missing[0]}'", b.line)
    return mapping


def parse_scenario(text: str) -> ScenarioDocument:
    """
    Parse a scenario document.

    Parameters
    ----------
    text : str
        Document text.

    Raises
    ------
    ScenarioSyntaxError
        Malformed line; carries line and column.
    ScenarioSemanticError
        Well-formed document that is not a valid scenario (unknown
        hypothesis in a row, priors not summing to 1, missing class, ...);
        carries the offending line.

    Returns
    -------
    ScenarioDocument
    """
    header, blocks = _tokenize(text)
    hyps, _ = _hypotheses(blocks)
    names = [h.name for h in hyps]

    classes, class_lines = [], {}
    for b in (b for b in blocks if b.kind == "[class]"):
        if "name" not in b.fields:
            raise ScenarioSyntaxError("[class] needs name=", b.line)
        cname = b.fields["name"][0]
        if cname in class_lines:
            raise ScenarioSemanticError(f"duplicate class '{cname}'", b.line)
        contains = True
        if "contains_evidence" in b.fields:
            flag, col = b.fields["contains_evidence"]
            if flag not in ("yes", "no"):
                raise ScenarioSyntaxError("contains_evidence must be yes or no", b.line, col)
            contains = flag == "yes"
        counts = _rows_to_mapping(b, "count", names, f"class '{cname}'", required=True)
        classes.append(ReferenceClass(cname, counts, contains))
        class_lines[cname] = b.line

    ev_blocks = [b for b in blocks if b.kind == "[evidence]"]
    if len(ev_blocks) != 1:
        line = ev_blocks[1].line if ev_blocks else len(text.splitlines())
        raise ScenarioSemanticError("document needs exactly one [evidence] block", line)
    ev = ev_blocks[0]
    evidence = EvidenceSet(
        counts=_rows_to_mapping(ev, "count", names, "[evidence]", required=False),
        epsilon=_rows_to_mapping(ev, "epsilon", names, "[evidence]", required=False),
    )

    class_name = None
    if "refclass" in header:
        class_name, line = header["refclass"]
        if class_name not in class_lines:
            raise ScenarioSemanticError(f"missing class '{class_name}'", line)

    try:
        scenario = Scenario(hyps, classes, evidence, name=header["scenario"][0])
    except InconsistentScenarioError as e:
        line = next((class_lines[c] for c in class_lines if f"'{c}'" in str(e)), ev.line)
        raise ScenarioSemanticError(str(e), line) from e

    rule = header["rule"][0] if "rule" in header else None
    logger.debug("parsed %r (rule=%s, class=%s)", scenario, rule, class_name)
    return ScenarioDocument(scenario, rule, class_name)


def read_scenario(file: Union[str, Path], encoding: str = "utf-8") -> ScenarioDocument:
    """Parse a scenario document from a file path or an object with a read method."""
    if hasattr(file, "read"):
        return parse_scenario(file.read())
    with open(file, "r", encoding=encoding) as fp:
        return parse_scenario(fp.read())


###############################################################################


def to_text(doc: ScenarioDocument) -> str:
    """Serialize a document; parse_scenario(to_text(doc)) == doc."""
    s = doc.scenario
    lines = [f"scenario {s.name}"]
    if doc.rule is not None:
        lines.append(f"rule {doc.rule}")
    if doc.class_name is not None:
        lines.append(f"refclass {doc.class_name}")
    lines.append("")
    for h in s.hypotheses:
        lines.append(f"[hypothesis] name={h.name} prior={format_number(h.prior)}")
    for c in s.classes:
        lines.append("")
        lines.append(f"[class] name={c.name}" + ("" if c.contains_evidence else " contains_evidence=no"))
        lines.extend(f"count {h} = {format_number(c.counts[h])}" for h in s.names)
    lines.append("")
    lines.append("[evidence]")
    for kind, mapping in (("count", s.evidence.counts), ("epsilon", s.evidence.epsilon)):
        if mapping is not None:
            lines.extend(f"{kind} {h} = {format_number(mapping[h])}" for h in s.names)
    return "\n".join(lines) + "\n"


def write_scenario(doc: ScenarioDocument, file: Union[str, Path], encoding: str = "utf-8") -> Path:
    file = Path(file)
    with open(file, "w", encoding=encoding) as fp:
        fp.write(to_text(doc))
    return file
