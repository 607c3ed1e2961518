# -*- coding: utf-8 -*-
"""
Observer-selection update rules on discrete scenarios.

Three rules are provided:
    - SSA-SIA ("ssa"): likelihood |D|/|C| for a chosen reference class C.
    - SSA+SIA ("ssa+sia"): prior reweighted by |C| before the SSA step, so
      the class cancels and the likelihood is |D|.
    - FNC ("fnc"): likelihood is the probability that at least one observer
      with your exact memories exists, 1 - (1 - eps)^|C|.

Every posterior keeps an odds ledger, one stage per piece of evidence.
"""

import logging
import math
from fractions import Fraction
from typing import Hashable, Iterable, NamedTuple, Optional, Sequence, Union

from pyanthropic.errors import (
    ContradictionError,
    DomainError,
    InconsistentScenarioError,
    RegimeViolationError,
)
from pyanthropic.numerics import (
    Magnitude,
    as_magnitude,
    is_exact,
    normalize_exact,
    normalize_log,
    to_float,
    unify,
)
from pyanthropic.settings import DEFAULTS

logger = logging.getLogger(__name__)

Value = Union[int, Fraction, float, Magnitude]

RULES = ("ssa", "ssa+sia", "fnc", "sia")

###############################################################################


class Hypothesis(NamedTuple):
    name: Hashable
    prior: Value


class ReferenceClass(NamedTuple):
    """Observer count |C|_h per hypothesis."""

    name: str
    counts: dict
    contains_evidence: bool = True


class EvidenceSet(NamedTuple):
    """Counts |D|_h of observers sharing your evidence and/or per-observer match probabilities."""

    counts: Optional[dict] = None
    epsilon: Optional[dict] = None


LedgerStage = NamedTuple(
    "ledger_stage",
    [("label", str), ("multipliers", dict), ("note", str)],
)


def small_epsilon(counts: Iterable[Value]) -> Value:
    """Per-observer match probability with eps * max(counts) = 10^-12."""
    top = max(unify(list(counts) + [1]))
    if isinstance(top, Magnitude):
        return Magnitude.power10(-12) / top
    return Fraction(1, 10**12) / top


def _is_zero(x: Value) -> bool:
    if isinstance(x, Magnitude):
        return x.is_zero()
    return x == 0


def _le(a: Value, b: Value) -> bool:
    a, b = unify([a, b])
    return a <= b


def _ratio(a: Value, b: Value) -> Optional[Union[Fraction, Magnitude]]:
    """a / b, or None if b is zero."""
    if _is_zero(b):
        return None
    return a / b


###############################################################################


class Scenario(object):
    """
    Hypotheses with priors, named reference classes and an evidence set.

    Raises InconsistentScenarioError on construction if the inputs do not
    describe a valid scenario.
    """

    def __init__(
        self,
        hypotheses: Sequence[Hypothesis],
        classes: Sequence[ReferenceClass],
        evidence: EvidenceSet,
        name: str = "scenario",
    ):
        self.name = name
        self.hypotheses = [Hypothesis(*h) for h in hypotheses]
        self.classes = [ReferenceClass(*c) for c in classes]
        self.evidence = EvidenceSet(*evidence)
        self._validate()

    @property
    def names(self) -> list:
        return [h.name for h in self.hypotheses]

    @property
    def priors(self) -> dict:
        return {h.name: h.prior for h in self.hypotheses}

    def get_class(self, class_name: str) -> ReferenceClass:
        for c in self.classes:
            if c.name == class_name:
                return c
        raise InconsistentScenarioError(
            f"scenario '{self.name}' has no reference class '{class_name}'"
        )

    def _check_mapping(self, what: str, mapping: dict):
        names = set(self.names)
        if set(mapping) != names:
            missing, extra = names - set(mapping), set(mapping) - names
            raise InconsistentScenarioError(
                f"{what} must cover every hypothesis (missing: {sorted(map(str, missing))}, "
                f"unknown: {sorted(map(str, extra))})"
            )
        for h, v in mapping.items():
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction, Magnitude)):
                raise InconsistentScenarioError(f"{what}[{h}] is not a number: {v!r}")
            if not isinstance(v, Magnitude) and not v >= 0:
                raise InconsistentScenarioError(f"{what}[{h}] must be >= 0, got {v}")

    def _validate(self):
        if not self.hypotheses:
            raise InconsistentScenarioError("a scenario needs at least one hypothesis")
        if len(set(self.names)) != len(self.names):
            raise InconsistentScenarioError("hypothesis names must be unique")
        class_names = [c.name for c in self.classes]
        if len(set(class_names)) != len(class_names):
            raise InconsistentScenarioError("reference class names must be unique")

        self._check_mapping("prior", self.priors)
        priors = list(self.priors.values())
        if all(is_exact(p) for p in priors):
            if sum(Fraction(p) for p in priors) != 1:
                raise InconsistentScenarioError(
                    f"priors sum to {sum(Fraction(p) for p in priors)}, not 1"
                )
        elif abs(math.fsum(to_float(p) for p in priors) - 1.0) > 1e-12:
            raise InconsistentScenarioError("priors do not sum to 1 within 1e-12")

        for c in self.classes:
            self._check_mapping(f"class '{c.name}'", c.counts)

        ev = self.evidence
        if ev.counts is None and ev.epsilon is None:
            raise InconsistentScenarioError("evidence needs counts or epsilon values")
        if ev.counts is not None:
            self._check_mapping("evidence count", ev.counts)
        if ev.epsilon is not None:
            self._check_mapping("epsilon", ev.epsilon)
            for h, e in ev.epsilon.items():
                if not _le(e, 1):
                    raise InconsistentScenarioError(f"epsilon[{h}] must be <= 1, got {e}")

        if ev.counts is not None:
            for c in self.classes:
                if not c.contains_evidence:
                    continue
                for h in self.names:
                    if not _le(ev.counts[h], c.counts[h]):
                        raise InconsistentScenarioError(
                            f"class '{c.name}' declared to contain the evidence set, "
                            f"but |D| > |C| for hypothesis {h}"
                        )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.name == other.name
            and self.hypotheses == other.hypotheses
            and self.classes == other.classes
            and self.evidence == other.evidence
        )

    def __repr__(self):
        return (
            f"Scenario(name={self.name!r}, hypotheses={self.names!r}, "
            f"classes={[c.name for c in self.classes]!r})"
        )


###############################################################################


class Posterior(object):
    """
    Normalized distribution over hypotheses plus its odds ledger.

    probs are Fractions when the prior and every ledger multiplier are
    exact (mode "exact"), floats otherwise (mode "magnitude").
    magnitudes always holds the probabilities as Magnitudes, which keeps
    values far below the float range.
    """

    def __init__(self, prior: dict, ledger: Iterable[LedgerStage] = ()):
        self.prior = dict(prior)
        self.ledger = tuple(ledger)
        self.mode = self._mode()
        self.probs, self.magnitudes = self._replay()

    def _mode(self) -> str:
        values = list(self.prior.values())
        for stage in self.ledger:
            values.extend(stage.multipliers.values())
        return "exact" if all(is_exact(v) for v in values) else "magnitude"

    def _weights(self, n_stages: Optional[int] = None) -> list:
        names = list(self.prior)
        stages = self.ledger if n_stages is None else self.ledger[:n_stages]
        if self.mode == "exact":
            w = [Fraction(self.prior[h]) for h in names]
            for stage in stages:
                w = [wi * Fraction(stage.multipliers[h]) for wi, h in zip(w, names)]
        else:
            w = [as_magnitude(self.prior[h]) for h in names]
            for stage in stages:
                w = [wi * as_magnitude(stage.multipliers[h]) for wi, h in zip(w, names)]
        return w

    def _replay(self) -> tuple[dict, dict]:
        names = list(self.prior)
        w = self._weights()
        if self.mode == "exact":
            p = normalize_exact(w)
            return dict(zip(names, p)), {h: as_magnitude(v) for h, v in zip(names, p)}
        m = normalize_log(w)
        return {h: v.to_float() for h, v in zip(names, m)}, dict(zip(names, m))

    def replay(self) -> dict:
        """Recompute probabilities from prior and ledger."""
        return self._replay()[0]

    def with_stage(self, label: str, multipliers: dict, note: str = "") -> "Posterior":
        """New posterior with one more ledger stage."""
        if set(multipliers) != set(self.prior):
            raise InconsistentScenarioError(
                f"stage '{label}' must give a multiplier for every hypothesis"
            )
        return Posterior(self.prior, self.ledger + (LedgerStage(label, dict(multipliers), note),))

    def odds(self, a: Hashable, b: Hashable) -> Union[Fraction, Magnitude]:
        """
        Posterior odds of a against b.

        Raises DomainError if b has zero posterior probability.
        """
        values = self.probs if self.mode == "exact" else self.magnitudes
        ratio = _ratio(values[a], values[b])
        if ratio is None:
            raise DomainError(f"odds {a}:{b} undefined, hypothesis {b} has zero probability")
        return ratio

    def cumulative_odds(
        self, a: Hashable, b: Hashable
    ) -> list[tuple[str, Optional[Union[Fraction, Magnitude]]]]:
        """
        Odds of a against b after the prior and after each ledger stage.

        A stage after which b carries zero weight has odds None.
        """
        names = list(self.prior)
        ia, ib = names.index(a), names.index(b)
        rows = []
        for k, label in enumerate(["prior"] + [s.label for s in self.ledger]):
            w = self._weights(k)
            rows.append((label, _ratio(w[ia], w[ib])))
        return rows

    def as_rows(self) -> list[tuple]:
        """(hypothesis, probability as float, exact form or '') per hypothesis."""
        rows = []
        for h, p in self.probs.items():
            exact = str(p) if self.mode == "exact" else ""
            rows.append((h, to_float(p) if self.mode == "exact" else p, exact))
        return rows

    def __getitem__(self, h: Hashable):
        return self.probs[h]

    def __repr__(self):
        return f"Posterior(mode={self.mode!r}, probs={self.probs!r}, stages={len(self.ledger)})"


###############################################################################


def prior_posterior(s: Scenario) -> Posterior:
    """Posterior with an empty ledger."""
    return Posterior(s.priors)


def update(posterior: Posterior, likelihoods: dict, label: str, note: str = "") -> Posterior:
    """Bayes update by per-hypothesis likelihoods, recorded as a ledger stage."""
    for h, v in likelihoods.items():
        if not isinstance(v, Magnitude) and v < 0:
            raise DomainError(f"likelihood for {h} is negative")
    return posterior.with_stage(label, likelihoods, note)


def _require_counts(s: Scenario) -> dict:
    if s.evidence.counts is None:
        raise InconsistentScenarioError(f"scenario '{s.name}' has no evidence counts |D|")
    return s.evidence.counts


def _ssa_multipliers(s: Scenario, cls: ReferenceClass) -> dict:
    d_counts = _require_counts(s)
    mult = {}
    for h in s.names:
        c, d = unify([cls.counts[h], d_counts[h]])
        if _is_zero(c):
            if not _is_zero(d):
                raise InconsistentScenarioError(
                    f"class '{cls.name}' has no observers under {h} but the evidence count is {d}"
                )
            # nobody to be
            mult[h] = c
        else:
            mult[h] = d / c
    return mult


def ssa_posterior(s: Scenario, class_name: str) -> Posterior:
    """P(h|D) proportional to P(h) |D|_h / |C|_h."""
    cls = s.get_class(class_name)
    post = prior_posterior(s).with_stage(
        f"SSA, class '{class_name}' (|D|/|C|)", _ssa_multipliers(s, cls)
    )
    logger.debug("ssa_posterior(%s, %s): %s", s.name, class_name, post.probs)
    return post


def sia_posterior(s: Scenario, class_name: str) -> Posterior:
    """Prior reweighted by |C|_h only."""
    cls = s.get_class(class_name)
    return prior_posterior(s).with_stage(f"SIA, class '{class_name}' (|C|)", dict(cls.counts))


def ssa_sia_posterior(s: Scenario, class_name: str) -> Posterior:
    """
    P(h|D) proportional to P(h) |D|_h.

    The SIA stage (x|C|) and the SSA stage (x|D|/|C|) are kept separate in
    the ledger so that the cancellation of the class counts is visible.
    """
    cls = s.get_class(class_name)
    post = sia_posterior(s, class_name).with_stage(
        f"SSA, class '{class_name}' (|D|/|C|)", _ssa_multipliers(s, cls)
    )
    logger.debug("ssa_sia_posterior(%s, %s): %s", s.name, class_name, post.probs)
    return post


def _at_least_one_match(epsilon: Value, count: Value) -> Magnitude:
    """1 - (1 - eps)^count, stable for tiny eps and huge counts."""
    e, c = as_magnitude(epsilon), as_magnitude(count)
    if e.is_zero() or c.is_zero():
        return Magnitude.zero()
    x = e * c
    ef = e.to_float()
    if ef >= 1.0:
        return Magnitude.one()
    ratio = -math.log1p(-ef) / ef if ef > 0.0 else 1.0
    lam = x.to_float() * ratio
    g = -math.expm1(-lam) / lam if lam > 0.0 else 1.0
    return x * Magnitude.from_value(ratio * g)


def fnc_posterior(s: Scenario, class_name: str, first_order: bool = False) -> Posterior:
    """
    Full non-indexical conditioning.

    Parameters
    ----------
    s : Scenario
        Needs per-observer match probabilities (evidence epsilon).
    class_name : str
        Class of observers who might share your memories.
    first_order : bool, optional
        Use the small-probability limit eps*|C| as likelihood instead of
        1 - (1 - eps)^|C|. Keeps rational scenarios exact. The default is False.

    Raises
    ------
    RegimeViolationError
        eps*|C| exceeds [fnc] max_expected_matches for some hypothesis.

    Returns
    -------
    Posterior
    """
    if s.evidence.epsilon is None:
        raise InconsistentScenarioError(f"scenario '{s.name}' has no epsilon values")
    cls = s.get_class(class_name)
    limit = DEFAULTS["fnc"]["max_expected_matches"]
    mult = {}
    for h in s.names:
        e, c = unify([s.evidence.epsilon[h], cls.counts[h]])
        expected = e * c
        if to_float(expected) > limit:
            raise RegimeViolationError(
                f"eps*|C| = {to_float(expected):.3g} under {h} exceeds {limit}; "
                "non-indexical conditioning assumes matches are improbable"
            )
        if first_order:
            mult[h] = expected
        else:
            mult[h] = _at_least_one_match(s.evidence.epsilon[h], cls.counts[h])
    label = "FNC (eps |C|)" if first_order else "FNC (1 - (1-eps)^|C|)"
    post = prior_posterior(s).with_stage(f"{label}, class '{class_name}'", mult)
    logger.debug("fnc_posterior(%s, %s): %s", s.name, class_name, post.probs)
    return post


def apply_rule(
    s: Scenario, rule: str, class_name: str, first_order: bool = False
) -> Posterior:
    """Dispatch on rule name: 'ssa', 'ssa+sia', 'fnc' or 'sia'."""
    if rule == "ssa":
        return ssa_posterior(s, class_name)
    if rule == "ssa+sia":
        return ssa_sia_posterior(s, class_name)
    if rule == "fnc":
        return fnc_posterior(s, class_name, first_order=first_order)
    if rule == "sia":
        return sia_posterior(s, class_name)
    raise DomainError(f"unknown rule '{rule}', use one of {RULES}")


###############################################################################


def _check_positive_int(name: str, v: int):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise DomainError(f"{name} must be an integer >= 1, got {v!r}")


def recruitment_invalid_update(pool_max: int, seq_len: int) -> Posterior:
    """
    Update on "someone was recruited with this coin sequence" as if it were news.

    P(N=n) proportional to 1 - (1 - 2^-seq_len)^n under a uniform prior on
    1..pool_max. Shown for contrast only; the ledger stage is flagged.
    """
    _check_positive_int("pool_max", pool_max)
    _check_positive_int("seq_len", seq_len)
    miss = 1 - Fraction(1, 2**seq_len)
    prior = {n: Fraction(1, pool_max) for n in range(1, pool_max + 1)}
    mult = {n: 1 - miss**n for n in prior}
    return Posterior(prior).with_stage(
        f"some recruit saw the sequence (1 - (1 - 2^-{seq_len})^n)",
        mult,
        note="known-invalid (pedagogical)",
    )


def recruitment_indexical_update(pool_max: int) -> Posterior:
    """P(N=n) = n / sum(1..pool_max), from "I was recruited"."""
    _check_positive_int("pool_max", pool_max)
    prior = {n: Fraction(1, pool_max) for n in range(1, pool_max + 1)}
    return Posterior(prior).with_stage("I was among the n recruits (n)", {n: n for n in prior})


def recruitment_scenario(pool_max: int, epsilon: Value = Fraction(1, 10**6)) -> Scenario:
    """Recruitment experiment as a scenario: n recruits, each matching your memories with prob epsilon."""
    _check_positive_int("pool_max", pool_max)
    ns = range(1, pool_max + 1)
    return Scenario(
        [Hypothesis(n, Fraction(1, pool_max)) for n in ns],
        [ReferenceClass("recruits", {n: n for n in ns})],
        EvidenceSet(epsilon={n: epsilon for n in ns}),
        name="recruitment",
    )


###############################################################################

CompanionCounts = NamedTuple(
    "companion_counts",
    [("x_a", Value), ("y_a", Value), ("x_b", Value), ("y_b", Value)],
)


def companion_scenario(counts: CompanionCounts) -> Scenario:
    """
    Theories A and B (prior 1/2 each) with X- and Y-type observers.

    An observer has a companion of the other type when the two are paired,
    so min(|X|, |Y|) observers of each type have one.
    """
    counts = CompanionCounts(*counts)
    x_a, y_a, x_b, y_b = unify(list(counts))
    if any(_is_zero(v) for v in (x_a, y_a, x_b, y_b)):
        raise DomainError(f"companion counts must be > 0, got {counts}")
    paired = {"A": min(x_a, y_a), "B": min(x_b, y_b)}
    return Scenario(
        [Hypothesis("A", Fraction(1, 2)), Hypothesis("B", Fraction(1, 2))],
        [
            ReferenceClass("X", {"A": x_a, "B": x_b}),
            ReferenceClass("Y", {"A": y_a, "B": y_b}),
            ReferenceClass("X+Y", {"A": x_a + y_a, "B": x_b + y_b}),
            ReferenceClass("paired", paired),
        ],
        EvidenceSet(counts=paired, epsilon=dict.fromkeys(paired, small_epsilon(paired.values()))),
        name="companions",
    )


def companion_odds(
    typ: str, counts: CompanionCounts, own_class_only: bool, rule: str = "ssa"
) -> Union[Fraction, Magnitude]:
    """
    Odds for theory A over B after learning you have a companion.

    Parameters
    ----------
    typ : str
        Your observer type, "X" or "Y".
    counts : CompanionCounts
        (|X|_A, |Y|_A, |X|_B, |Y|_B), all > 0.
    own_class_only : bool
        Reference class is your own type only (True) or both types (False).
    rule : str, optional
        "ssa" (SSA-SIA), "ssa+sia" or "fnc". The default is "ssa".

    Returns
    -------
    Fraction or Magnitude
        Exact for integer/rational counts.
    """
    if typ not in ("X", "Y"):
        raise DomainError(f"observer type must be 'X' or 'Y', got {typ!r}")
    s = companion_scenario(counts)
    if rule == "fnc":
        post = fnc_posterior(s, "paired", first_order=True)
    else:
        post = apply_rule(s, rule, typ if own_class_only else "X+Y")
    return post.odds("A", "B")


###############################################################################


def _check_birth_rank(prior: dict, r: int):
    _check_positive_int("r", r)
    for n in prior:
        _check_positive_int("total n", n)
    if not any(n >= r and not _is_zero(p) for n, p in prior.items()):
        raise ContradictionError(f"no prior mass at n >= {r}")


def _rank_scenario(prior: dict, d_counts: dict, name: str) -> Scenario:
    return Scenario(
        [Hypothesis(n, p) for n, p in prior.items()],
        [ReferenceClass("all observers", {n: n for n in prior})],
        EvidenceSet(counts=d_counts),
        name=name,
    )


def doomsday_scenario(prior: dict, r: int) -> Scenario:
    """
    Totals N=n as hypotheses, your birth rank r as evidence.

    Classes: "all observers" (|C| = n) and "birth rank r" (the one observer
    who could share your memories, if n >= r).
    """
    _check_birth_rank(prior, r)
    # exactly one observer has birth rank r if n >= r
    d_counts = {n: (1 if n >= r else 0) for n in prior}
    return Scenario(
        [Hypothesis(n, p) for n, p in prior.items()],
        [
            ReferenceClass("all observers", {n: n for n in prior}),
            ReferenceClass(f"birth rank {r}", dict(d_counts)),
        ],
        EvidenceSet(counts=d_counts, epsilon=dict.fromkeys(prior, small_epsilon([1]))),
        name="doomsday",
    )


def doomsday_posterior(prior: dict, r: int) -> Posterior:
    """P(N=n | R=r) proportional to P(N=n)/n for n >= r, else 0."""
    return ssa_posterior(doomsday_scenario(prior, r), "all observers")


def nodoom_posterior(prior: dict, r: int) -> Posterior:
    """Prior truncated to n >= r and renormalized."""
    _check_birth_rank(prior, r)
    return Posterior(prior).with_stage(
        f"birth rank {r} exists (n >= {r})", {n: (1 if n >= r else 0) for n in prior}
    )


def sia_reweight(prior: dict) -> dict:
    """n P(n), normalized."""
    names = list(prior)
    w = [n * p if is_exact(p) else as_magnitude(n) * as_magnitude(p) for n, p in prior.items()]
    if all(is_exact(v) for v in w):
        return dict(zip(names, normalize_exact(w)))
    return {n: m.to_float() for n, m in zip(names, normalize_log(w))}


def generalized_doomsday(prior: dict, set_size: int) -> Posterior:
    """
    Posterior on the total N after learning you are in a set of set_size observers.

    P(in set | N=n) = set_size/n for n >= set_size, else 0.
    """
    _check_birth_rank(prior, set_size)
    d_counts = {n: (set_size if n >= set_size else 0) for n in prior}
    return ssa_posterior(_rank_scenario(prior, d_counts, "generalized doomsday"), "all observers")
