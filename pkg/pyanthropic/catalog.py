# -*- coding: utf-8 -*-
"""
Worked examples as parameterized builders, each with its expected results.

Every builder wires its parameters into a Scenario (or a Posterior plus
ledger updates) and lets pyanthropic.inference do the arithmetic.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Callable, NamedTuple, Optional, Union

from pyanthropic import fermi
from pyanthropic.errors import DomainError
from pyanthropic.inference import (
    EvidenceSet,
    Hypothesis,
    Posterior,
    ReferenceClass,
    Scenario,
    apply_rule,
    doomsday_scenario,
    fnc_posterior,
    generalized_doomsday,
    prior_posterior,
    recruitment_indexical_update,
    recruitment_invalid_update,
    recruitment_scenario,
    small_epsilon,
    update,
)
from pyanthropic.numerics import (
    Gaussian10,
    Magnitude,
    as_exact,
    as_magnitude,
    central_interval,
    lognormal_mean,
    mag_sub,
    mag_sum,
    to_float,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

###############################################################################


def _coin_scenario(d_counts: dict, classes: dict, name: str) -> Scenario:
    """
    Fair coin, hypotheses Heads/Tails.

    d_counts are the observers sharing your evidence; they also form the
    class "matching" of observers who might have your exact memories, which
    non-indexical conditioning counts.
    """
    eps = small_epsilon(d_counts.values())
    cls = [ReferenceClass(k, v) for k, v in classes.items()]
    cls.append(ReferenceClass("matching", dict(d_counts)))
    return Scenario(
        [Hypothesis("Heads", HALF), Hypothesis("Tails", HALF)],
        cls,
        EvidenceSet(counts=dict(d_counts), epsilon=dict.fromkeys(d_counts, eps)),
        name=name,
    )


def _posterior(s: Scenario, rule: str, class_name: str) -> Posterior:
    if rule == "fnc":
        return fnc_posterior(s, "matching", first_order=True)
    return apply_rule(s, rule, class_name)


def sleeping_beauty(heads_wakenings: int = 1, tails_wakenings: int = 2, rule: str = "fnc") -> Fraction:
    """P(Heads) after a wakening; reference class for SSA is Beauty's own wakenings."""
    if heads_wakenings < 1 or tails_wakenings < 1:
        raise DomainError("wakening counts must be >= 1")
    counts = {"Heads": heads_wakenings, "Tails": tails_wakenings}
    s = _coin_scenario(counts, {"wakenings": counts}, "sleeping beauty")
    return _posterior(s, rule, "wakenings").probs["Heads"]


# spellings used in the scenario write-ups
BEAUTY_CLASS_ALIASES = {"beauty-only": "own", "all-humans": "all_humans"}
BEAUTY_OBSERVER_ALIASES = {"beauty-baseline": "beauty", "prince-sees-beauty": "prince_sees_beauty"}


def beauty_and_prince(
    rule: str = "ssa", ref_class: str = "both", observer: str = "beauty", others: int = 0
) -> Fraction:
    """
    Beauty is woken once on Heads, twice on Tails; the Prince is woken on
    both days either way.

    Parameters
    ----------
    rule : str
        "ssa", "ssa+sia" or "fnc".
    ref_class : str
        "own" (your own wakenings), "both" (Beauty's and the Prince's) or
        "all_humans" (both plus `others` wakenings of other people).
    observer : str
        "beauty", "prince", or "prince_sees_beauty" (the Prince, after seeing
        Beauty awake).
    others : int
        Extra wakenings in the "all_humans" class.

    The hyphenated spellings in BEAUTY_CLASS_ALIASES ("beauty-only" for
    "own") and BEAUTY_OBSERVER_ALIASES ("beauty-baseline" for "beauty") are
    accepted too.
    """
    ref_class = BEAUTY_CLASS_ALIASES.get(ref_class, ref_class)
    observer = BEAUTY_OBSERVER_ALIASES.get(observer, observer)
    if others < 0:
        raise DomainError("others must be >= 0")
    beauty = {"Heads": 1, "Tails": 2}
    prince = {"Heads": 2, "Tails": 2}
    classes = {
        "both": {"Heads": 3, "Tails": 4},
        "all_humans": {"Heads": others + 3, "Tails": others + 4},
    }
    if observer == "beauty":
        own, d_counts = beauty, beauty
    elif observer in ("prince", "prince_sees_beauty"):
        own, d_counts = prince, prince
    else:
        raise DomainError(f"unknown observer {observer!r}")
    classes["own"] = own
    if ref_class not in classes:
        raise DomainError(f"unknown reference class {ref_class!r}")

    post = _posterior(_coin_scenario(d_counts, classes, "beauty and prince"), rule, ref_class)
    if observer == "prince_sees_beauty":
        # Beauty is awake on one of the Prince's two wakenings under Heads
        post = update(post, {"Heads": HALF, "Tails": 1}, "Prince sees Beauty awake")
    return post.probs["Heads"]


def told_monday(stance: str = "halfer") -> Fraction:
    """P(Heads) after Beauty learns it is Monday; halfer starts from 1/2, thirder from 1/3."""
    rule = {"halfer": "ssa", "thirder": "fnc"}.get(stance)
    if rule is None:
        raise DomainError(f"stance must be 'halfer' or 'thirder', got {stance!r}")
    counts = {"Heads": 1, "Tails": 2}
    post = _posterior(_coin_scenario(counts, {"wakenings": counts}, "told monday"), rule, "wakenings")
    post = update(post, {"Heads": 1, "Tails": HALF}, "told it is Monday")
    return post.probs["Heads"]


def sailors_child(knows_guidebook: bool = False, rule: str = "fnc") -> Fraction:
    """
    P(Heads) for the sailor's child.

    Heads: one child, by one of two women; Tails: a child by each. The
    chance that you in particular exist is 1/2 under Heads and 1 under
    Tails. The guidebook stage: your city is listed first, which the
    sailor always visits.
    """
    counts = {"Heads": HALF, "Tails": 1}
    post = _posterior(_coin_scenario(counts, {"children": counts}, "sailor's child"), rule, "children")
    if knows_guidebook:
        post = update(post, {"Heads": 1, "Tails": HALF}, "own city is listed first")
    return post.probs["Heads"]


###############################################################################

# planet-beings (planets everywhere) and star-beings per regime
MAROCHNIK_REGIMES = {"few": (10**30, 1), "many": (1, 10**30)}
MAROCHNIK_ROWS = ("prior", "sia", "ssa", "companions", "location")
MAROCHNIK_SYMBOL_F = Fraction(1, 10)

MarochnikColumn = NamedTuple(
    "marochnik_column",
    [("observer", str), ("odds", list), ("symbols", tuple)],
)


def _marochnik_odds(regime: str, rule: str, ref_class: str, observer: str, f) -> list:
    if regime not in MAROCHNIK_REGIMES:
        raise DomainError(f"regime must be 'few' or 'many', got {regime!r}")
    if rule not in ("ssa", "ssa+sia"):
        raise DomainError(f"rule must be 'ssa' or 'ssa+sia', got {rule!r}")
    if ref_class not in ("own", "combined"):
        raise DomainError(f"class must be 'own' or 'combined', got {ref_class!r}")
    if observer not in ("planet", "star"):
        raise DomainError(f"observer must be 'planet' or 'star', got {observer!r}")
    if not 0 < f <= 1:
        raise DomainError(f"f must be in (0, 1], got {f}")

    n_planet, n_star = MAROCHNIK_REGIMES[regime]
    planet = {"marochnik": f * n_planet, "everywhere": n_planet}
    star = {"marochnik": n_star, "everywhere": n_star}
    combined = {h: planet[h] + star[h] for h in planet}
    d_counts = planet if observer == "planet" else star
    s = Scenario(
        [Hypothesis("marochnik", HALF), Hypothesis("everywhere", HALF)],
        [
            ReferenceClass("planet", planet, contains_evidence=observer == "planet"),
            ReferenceClass("star", star, contains_evidence=observer == "star"),
            ReferenceClass("combined", combined),
        ],
        EvidenceSet(counts=d_counts),
        name=f"marochnik ({regime})",
    )
    post = apply_rule(s, rule, observer if ref_class == "own" else "combined")
    # a random star has planet-beings f times less often under Marochnik's theory
    companions = {"marochnik": f, "everywhere": 1} if observer == "star" else dict.fromkeys(planet, 1)
    post = update(post, companions, "existence of companions known")
    post = update(post, {"marochnik": 1, "everywhere": f}, "location of sun in galaxy known")
    odds = [v for _, v in post.cumulative_odds("marochnik", "everywhere")]
    if rule == "ssa":
        odds.insert(1, None)
    return odds


def _symbol(odds, f_symbol) -> str:
    if odds is None:
        return ""
    k = round(math.log(to_float(odds)) / math.log(to_float(f_symbol)))
    return {0: "1", 1: "f", -1: "1/f"}.get(k, f"f^{k}")


def marochnik_symbols(
    regime: str = "few", rule: str = "ssa", ref_class: str = "own", observer: str = "planet"
) -> tuple:
    """Odds rows for one observer as symbols in {1, f, 1/f}; '' for rows the rule skips."""
    odds = _marochnik_odds(regime, rule, ref_class, observer, MAROCHNIK_SYMBOL_F)
    return tuple(_symbol(v, MAROCHNIK_SYMBOL_F) for v in odds)


def marochnik_table(
    regime: str = "few", rule: str = "ssa", ref_class: str = "own", f: Union[float, Fraction] = 0.1
) -> dict[str, MarochnikColumn]:
    """
    Odds for Marochnik's theory against "planets everywhere", stage by stage.

    Rows are MAROCHNIK_ROWS: ordinary prior, SIA adjustment (None under
    SSA-SIA), SSA adjustment, existence of companions known, location of
    the sun known. Symbols come from the fixed value MAROCHNIK_SYMBOL_F, odds from `f`;
    at f = 1 every symbol collapses to "1".
    """
    out = {}
    for observer in ("planet", "star"):
        odds = _marochnik_odds(regime, rule, ref_class, observer, f)
        symbols = marochnik_symbols(regime, rule, ref_class, observer)
        if f == 1:
            symbols = tuple(s and "1" for s in symbols)
        out[observer] = MarochnikColumn(observer, odds, symbols)
    return out


###############################################################################


def bacteria_odds(
    rule: str = "ssa",
    ratio: Magnitude = Magnitude.power10(21),
    humans: Magnitude = Magnitude.power10(10),
    precise: bool = False,
) -> Magnitude:
    """
    Odds multiplier for "bacteria are intelligent".

    That theory has `ratio` times as many observers as humans. With
    precise=False the observer total is approximated by ratio*humans.
    rule "sia" applies the SIA reweighting alone.
    """
    ratio, humans = as_magnitude(ratio), as_magnitude(humans)
    if ratio.is_zero():
        raise DomainError("ratio must be > 0")
    total = ratio * humans + (humans if precise else Magnitude.zero())
    d_counts = {"intelligent": humans, "not": humans}
    s = Scenario(
        [Hypothesis("intelligent", HALF), Hypothesis("not", HALF)],
        [
            ReferenceClass("observers", {"intelligent": total, "not": humans}),
            ReferenceClass("matching", dict(d_counts)),
        ],
        EvidenceSet(counts=d_counts, epsilon=dict.fromkeys(d_counts, small_epsilon([humans]))),
        name="bacteria",
    )
    post = _posterior(s, rule, "observers")
    return as_magnitude(post.odds("intelligent", "not"))


###############################################################################

DuplicateThreshold = NamedTuple(
    "duplicate_threshold",
    [
        ("genome_log10", float),
        ("genome_log10_rounded", float),
        ("memory_log10", float),
        ("memory_log10_rounded", float),
        ("observers_log10", float),
        ("factor", Magnitude),
        ("factor_rounded", Magnitude),
        ("below_one", bool),
        ("memory_dominates", bool),
    ],
)


def _round_sig(x: float, digits: int = 2) -> float:
    if x == 0:
        return 0.0
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def duplicate_threshold(
    genome_variable_sites: int = 3 * 10**5,
    memory_bits: int = 10**11,
    planets: Magnitude = Magnitude.power10(22),
    per_planet_observers: Magnitude = Magnitude.power10(10),
    generations: Magnitude = Magnitude.power10(10),
) -> DuplicateThreshold:
    """
    How many times larger than the observable universe the universe must be
    before another observer with your memories is likely.

    The count of possible memory sets is 2^memory_bits; the rounded figures
    keep two significant digits of the exponent (10^(3e10) for 2^(10^11)).
    """
    for key, n in (("genome_variable_sites", genome_variable_sites), ("memory_bits", memory_bits)):
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise DomainError(f"{key} must be an integer >= 0, got {n!r}")
    observers = as_magnitude(planets) * as_magnitude(per_planet_observers) * as_magnitude(generations)
    if observers.is_zero():
        raise DomainError("observer count must be > 0")
    genome = genome_variable_sites * math.log10(4)
    memory = memory_bits * math.log10(2)
    factor = Magnitude(memory) / observers
    factor_rounded = Magnitude(_round_sig(memory)) / observers
    return DuplicateThreshold(
        genome_log10=genome,
        genome_log10_rounded=_round_sig(genome),
        memory_log10=memory,
        memory_log10_rounded=_round_sig(memory),
        observers_log10=observers.log10,
        factor=factor,
        factor_rounded=factor_rounded,
        below_one=factor.log10 <= 0,
        memory_dominates=genome < memory,
    )


def duplicate_factor(rounded: bool = True, memory_bits: int = 10**11) -> Magnitude:
    dt = duplicate_threshold(memory_bits=memory_bits)
    return dt.factor_rounded if rounded else dt.factor


###############################################################################

LANDSCAPE_COMPARISONS = ("L-vs-S1", "L-vs-SD", "L-vs-Sstar-split")


def landscape_scenario(
    valleys: Magnitude = Magnitude.power10(500),
    life_valleys: Magnitude = Magnitude.power10(10),
    memory_valleys: Magnitude = Magnitude.power10(6),
    comparison: str = "L-vs-S1",
    universes: Magnitude = Magnitude.power10(600),
) -> Scenario:
    """
    Landscape theory L against a single-law theory.

    Under L every valley is realized, so `universes` spread evenly over
    `valleys`. S1: one known law compatible with your memories. SD: one law
    chosen among the life-compatible valleys. S*: one law, unknown which,
    split into sub-theories by what the law allows. Universes with life all
    have the same population.
    """
    V, life, mem, U = (as_magnitude(v) for v in (valleys, life_valleys, memory_valleys, universes))
    if not (mem <= life <= V):
        raise DomainError("need memory_valleys <= life_valleys <= valleys")
    if comparison not in LANDSCAPE_COMPARISONS:
        raise DomainError(f"comparison must be one of {LANDSCAPE_COMPARISONS}")
    half, zero = Magnitude.from_value(0.5), Magnitude.zero()

    rows = [("L", half, U * life / V, U * mem / V)]
    if comparison == "L-vs-S1":
        rows.append(("S1", half, U, U))
    elif comparison == "L-vs-SD":
        rows.append(("SD-memory", half * mem / life, U, U))
        rows.append(("SD-other", half * mag_sub(life, mem) / life, U, zero))
    else:
        rows.append(("S*-memory", half * mem / V, U, U))
        rows.append(("S*-life-other", half * mag_sub(life, mem) / V, U, zero))
        rows.append(("S*-lifeless", half * mag_sub(V, life) / V, zero, zero))

    d_counts = {name: d for name, _, _, d in rows}
    return Scenario(
        [Hypothesis(name, prior) for name, prior, _, _ in rows],
        [
            ReferenceClass("observers", {name: c for name, _, c, _ in rows}),
            ReferenceClass("matching", dict(d_counts)),
        ],
        EvidenceSet(counts=d_counts, epsilon=dict.fromkeys(d_counts, small_epsilon([U]))),
        name=f"landscape {comparison}",
    )


def landscape_odds(
    valleys: Magnitude = Magnitude.power10(500),
    life_valleys: Magnitude = Magnitude.power10(10),
    memory_valleys: Magnitude = Magnitude.power10(6),
    comparison: str = "L-vs-S1",
    rule: str = "fnc",
) -> Magnitude:
    """Posterior odds for L against all sub-theories of the rival theory."""
    s = landscape_scenario(valleys, life_valleys, memory_valleys, comparison)
    post = _posterior(s, rule, "observers")
    rival = mag_sum([m for h, m in post.magnitudes.items() if h != "L"])
    return post.magnitudes["L"] / rival


###############################################################################


def doomsday(
    r: int = 6 * 10**10,
    small: int = 10**11,
    large: int = 10**14,
    rule: str = "ssa",
    quantity: str = "odds",
) -> Fraction:
    """
    Two-point prior (1/2 each) on the total number of humans, birth rank r.

    quantity "odds" gives the odds for `large` against `small`, "probability"
    the posterior probability of `large`.
    """
    s = doomsday_scenario({small: HALF, large: HALF}, r)
    if rule == "fnc":
        post = fnc_posterior(s, f"birth rank {r}", first_order=True)
    else:
        post = apply_rule(s, rule, "all observers")
    if quantity == "odds":
        return post.odds(large, small)
    if quantity == "probability":
        return post.probs[large]
    raise DomainError(f"quantity must be 'odds' or 'probability', got {quantity!r}")


def jupiter_odds(humans: int = 10**12, jupiter_beings: int = 10**16, include_humans: bool = False) -> Fraction:
    """
    Odds multiplier for "intelligent beings live on Jupiter", given that you
    are human. Without include_humans the total under that theory is
    approximated by the Jupiter population alone.
    """
    total = jupiter_beings + (humans if include_humans else 0)
    if total == humans:
        raise DomainError("theories must differ in their totals")
    post = generalized_doomsday({humans: HALF, total: HALF}, humans)
    return post.odds(total, humans)


def recruitment(pool_max: int = 20, seq_len: int = 3, method: str = "indexical", n: int = 1) -> Fraction:
    """P(N=n) in the recruitment experiment under one of three updates."""
    if method == "invalid":
        post = recruitment_invalid_update(pool_max, seq_len)
    elif method == "indexical":
        post = recruitment_indexical_update(pool_max)
    elif method == "fnc":
        post = fnc_posterior(recruitment_scenario(pool_max), "recruits", first_order=True)
    else:
        raise DomainError(f"method must be 'invalid', 'indexical' or 'fnc', got {method!r}")
    return post.probs[n]


def size_presumption(
    galaxies_a: int = 10**24,
    galaxies_b: int = 10**12,
    rule: str = "fnc",
    size_penalized_prior: bool = False,
) -> Fraction:
    """
    Odds for theory A (bigger universe) against B, same density of observers.

    size_penalized_prior makes prior odds inversely proportional to size.
    """
    if galaxies_a <= 0 or galaxies_b <= 0:
        raise DomainError("galaxy counts must be > 0")
    if size_penalized_prior:
        total = galaxies_a + galaxies_b
        priors = {"A": Fraction(galaxies_b, total), "B": Fraction(galaxies_a, total)}
    else:
        priors = {"A": HALF, "B": HALF}
    counts = {"A": galaxies_a, "B": galaxies_b}
    s = Scenario(
        [Hypothesis(h, p) for h, p in priors.items()],
        [ReferenceClass("observers", counts), ReferenceClass("matching", dict(counts))],
        EvidenceSet(counts=counts, epsilon=dict.fromkeys(counts, small_epsilon(counts.values()))),
        name="universe size",
    )
    return _posterior(s, rule, "observers").odds("A", "B")


def recalculation_odds(
    prior_odds: Fraction = Fraction(1, 10),
    error_rate: Fraction = Fraction(1, 10),
    planet_ratio: int = 10**6,
    rule: str = "ordinary",
) -> Fraction:
    """
    Odds that the first (Newtonian) planet count was wrong after a divergent
    recalculation gives `planet_ratio` times more earth-like planets.
    A divergent result is certain if the first count was wrong and happens
    at `error_rate` otherwise.
    """
    prior_odds = Fraction(prior_odds)
    priors = {"wrong": prior_odds / (1 + prior_odds), "right": 1 / (1 + prior_odds)}
    planets = {"wrong": planet_ratio, "right": 1}
    s = Scenario(
        [Hypothesis(h, p) for h, p in priors.items()],
        [ReferenceClass("planets", planets)],
        EvidenceSet(epsilon=dict.fromkeys(planets, small_epsilon(planets.values()))),
        name="recalculation",
    )
    if rule == "ordinary":
        post = prior_posterior(s)
    elif rule == "fnc":
        post = fnc_posterior(s, "planets", first_order=True)
    else:
        raise DomainError(f"rule must be 'ordinary' or 'fnc', got {rule!r}")
    post = update(post, {"wrong": 1, "right": Fraction(error_rate)}, "divergent recalculation")
    return post.odds("wrong", "right")


def fermi_analytic(quantity: str = "posterior_mean", factor: str = "p") -> float:
    """
    Closed-form numbers of the interference model at V = 0 with default priors.

    quantity is one of: prior_lower, prior_upper, prior_mean, posterior_median,
    posterior_sd10, posterior_lower, posterior_upper, posterior_mean, span_log10.
    """
    prior = fermi.FermiPrior()
    spec = fermi.FactorSpec(parent=factor)
    g = fermi.prior_factor(spec)
    fp = fermi.factor_posterior_analytic(prior, spec)
    values = {
        "prior_lower": lambda: central_interval(g)[0],
        "prior_upper": lambda: central_interval(g)[1],
        "prior_mean": lambda: lognormal_mean(g),
        "posterior_median": lambda: 10.0**fp.mean10,
        "posterior_sd10": lambda: fp.sd10,
        "posterior_lower": lambda: fermi.posterior_interval(fp)[0],
        "posterior_upper": lambda: fermi.posterior_interval(fp)[1],
        "posterior_mean": lambda: fp.mean_value,
        "span_log10": lambda: fermi.span_log10(prior.sd10_p if factor == "p" else prior.sd10_f),
    }
    if quantity not in values:
        raise DomainError(f"unknown quantity {quantity!r}")
    return values[quantity]()


###############################################################################

ExpectedResult = NamedTuple(
    "expected_result",
    [("kwargs", dict), ("value", Any), ("source", str), ("tolerance", float)],
)

CatalogEntry = NamedTuple(
    "catalog_entry",
    [
        ("name", str),
        ("quantity", str),
        ("builder", Callable),
        ("params", dict),
        ("expected", list),
    ],
)

CheckOutcome = NamedTuple(
    "check_outcome",
    [
        ("entry", str),
        ("kwargs", dict),
        ("passed", bool),
        ("got", Any),
        ("expected", Any),
        ("source", str),
    ],
)


def _exp(value, source: str, tolerance: float = 0.0, **kwargs) -> ExpectedResult:
    return ExpectedResult(kwargs, value, source, tolerance)


def _marochnik_expected() -> list[ExpectedResult]:
    # (regime, rule, class) -> (planet column, star column)
    table = {
        ("few", "ssa", "own"): (("1", "", "1", "1", "1/f"), ("1", "", "1", "f", "1")),
        ("few", "ssa+sia", "own"): (("1", "f", "f", "f", "1"), ("1", "1", "1", "f", "1")),
        ("few", "ssa", "combined"): (("1", "", "1", "1", "1/f"), ("1", "", "1/f", "1", "1/f")),
        ("few", "ssa+sia", "combined"): (("1", "f", "f", "f", "1"), ("1", "f", "1", "f", "1")),
        ("many", "ssa", "own"): (("1", "", "1", "1", "1/f"), ("1", "", "1", "f", "1")),
        ("many", "ssa+sia", "own"): (("1", "f", "f", "f", "1"), ("1", "1", "1", "f", "1")),
        ("many", "ssa", "combined"): (("1", "", "f", "f", "1"), ("1", "", "1", "f", "1")),
        ("many", "ssa+sia", "combined"): (("1", "1", "f", "f", "1"), ("1", "1", "1", "f", "1")),
    }
    out = []
    for (regime, rule, ref_class), cols in table.items():
        for observer, symbols in zip(("planet", "star"), cols):
            out.append(
                _exp(
                    symbols,
                    f"density-of-observers table, star-beings {'less' if regime == 'few' else 'more'} "
                    f"numerous, {rule}, {ref_class} class, {observer}-beings",
                    regime=regime,
                    rule=rule,
                    ref_class=ref_class,
                    observer=observer,
                )
            )
    return out


def _build_catalog() -> dict[str, CatalogEntry]:
    entries = [
        CatalogEntry(
            "sleeping_beauty",
            "P(Heads)",
            sleeping_beauty,
            {"heads_wakenings": 1, "tails_wakenings": 2, "rule": "fnc"},
            [
                _exp(Fraction(1, 3), "Sleeping Beauty, thirder answer", rule="fnc"),
                _exp(Fraction(1, 3), "Sleeping Beauty, SSA+SIA", rule="ssa+sia"),
                _exp(HALF, "Sleeping Beauty, SSA-SIA with her own wakenings", rule="ssa"),
                _exp(HALF, "symmetric wakenings", heads_wakenings=1, tails_wakenings=1, rule="fnc"),
            ],
        ),
        CatalogEntry(
            "beauty_and_prince",
            "P(Heads)",
            beauty_and_prince,
            {"rule": "ssa", "ref_class": "both", "observer": "beauty", "others": 0},
            [
                _exp(Fraction(2, 5), "Beauty, class of Beauty and Prince", observer="beauty"),
                _exp(Fraction(4, 7), "Prince before seeing Beauty", observer="prince"),
                _exp(Fraction(2, 5), "Prince after seeing Beauty awake", observer="prince_sees_beauty"),
                _exp(Fraction(1, 3), "Beauty, FNC", rule="fnc"),
                _exp(HALF, "Prince, FNC", rule="fnc", observer="prince"),
                _exp(Fraction(1, 3), "Prince after seeing Beauty, FNC", rule="fnc", observer="prince_sees_beauty"),
                _exp(
                    Fraction(1, 3),
                    "Beauty, class of all humans, large N limit",
                    1e-6,
                    ref_class="all_humans",
                    others=10**7,
                ),
            ],
        ),
        CatalogEntry(
            "told_monday",
            "P(Heads | Monday)",
            told_monday,
            {"stance": "halfer"},
            [
                _exp(Fraction(2, 3), "halfer told it is Monday", stance="halfer"),
                _exp(HALF, "thirder told it is Monday", stance="thirder"),
            ],
        ),
        CatalogEntry(
            "sailors_child",
            "P(Heads)",
            sailors_child,
            {"knows_guidebook": False, "rule": "fnc"},
            [
                _exp(Fraction(1, 3), "sailor's child, 2-to-1 for two children", knows_guidebook=False),
                _exp(HALF, "sailor's child with the guidebook", knows_guidebook=True),
            ],
        ),
        CatalogEntry(
            "recruitment",
            "P(N=n)",
            recruitment,
            {"pool_max": 20, "seq_len": 3, "method": "indexical", "n": 1},
            [
                _exp(0.0093, "invalid update, n=1", 0.01, method="invalid", n=1),
                _exp(0.0690, "invalid update, n=20", 0.01, method="invalid", n=20),
                _exp(Fraction(1, 210), "indexical update, n=1", method="indexical", n=1),
                _exp(Fraction(20, 210), "indexical update, n=20", method="indexical", n=20),
                _exp(Fraction(7, 210), "non-indexical update, n=7", method="fnc", n=7),
            ],
        ),
        CatalogEntry(
            "doomsday",
            "odds(N=large)",
            doomsday,
            {"r": 6 * 10**10, "small": 10**11, "large": 10**14, "rule": "ssa", "quantity": "odds"},
            [
                _exp(Fraction(1, 1000), "Doomsday shift for 10^14 humans"),
                _exp(Fraction(1, 1001), "posterior 0.000999001 for 10^14 humans", quantity="probability"),
                _exp(Fraction(1, 500), "revised birth rank", r=16 * 10**10, small=2 * 10**11),
                _exp(Fraction(1), "SSA+SIA gives the no-doom odds", rule="ssa+sia"),
                _exp(Fraction(1), "FNC gives the no-doom odds", rule="fnc"),
            ],
        ),
        CatalogEntry(
            "jupiter",
            "odds multiplier",
            jupiter_odds,
            {"humans": 10**12, "jupiter_beings": 10**16, "include_humans": False},
            [_exp(Fraction(1, 10000), "beings on Jupiter, factor 10^12/10^16")],
        ),
        CatalogEntry(
            "marochnik",
            "odds rows",
            marochnik_symbols,
            {"regime": "few", "rule": "ssa", "ref_class": "own", "observer": "planet"},
            _marochnik_expected(),
        ),
        CatalogEntry(
            "bacteria",
            "odds multiplier",
            bacteria_odds,
            {"rule": "ssa", "ratio": Magnitude.power10(21), "humans": Magnitude.power10(10), "precise": False},
            [
                _exp(Magnitude.power10(21), "intelligent bacteria, SIA alone", 1e-9, rule="sia"),
                _exp(Magnitude.power10(-21), "intelligent bacteria, SSA-SIA", 1e-9, rule="ssa"),
                _exp(Magnitude.one(), "intelligent bacteria, SSA+SIA", 1e-9, rule="ssa+sia"),
                _exp(Magnitude.one(), "intelligent bacteria, FNC", 1e-9, rule="fnc"),
            ],
        ),
        CatalogEntry(
            "duplicate_threshold",
            "size factor",
            duplicate_factor,
            {"rounded": True, "memory_bits": 10**11},
            [_exp(Magnitude.power10(29999999958), "universe size needed for a duplicate of you")],
        ),
        CatalogEntry(
            "landscape",
            "odds(L)",
            landscape_odds,
            {
                "valleys": Magnitude.power10(500),
                "life_valleys": Magnitude.power10(10),
                "memory_valleys": Magnitude.power10(6),
                "comparison": "L-vs-S1",
                "rule": "fnc",
            },
            [
                _exp(Magnitude.power10(-494), "landscape against one known law, FNC", 1e-9),
                _exp(Magnitude.power10(-4), "landscape against one known law, SSA-SIA", 1e-9, rule="ssa"),
                _exp(Magnitude.power10(-490), "landscape against a life-loving designer, FNC", 1e-9, comparison="L-vs-SD"),
                _exp(Magnitude.one(), "landscape against a life-loving designer, SSA-SIA", 1e-9, comparison="L-vs-SD", rule="ssa"),
                _exp(Magnitude.power10(490), "landscape against one unknown law, SSA-SIA", 1e-9, comparison="L-vs-Sstar-split", rule="ssa"),
                _exp(Magnitude.one(), "landscape against one unknown law, FNC", 1e-9, comparison="L-vs-Sstar-split"),
            ],
        ),
        CatalogEntry(
            "universe_size",
            "odds(A)",
            size_presumption,
            {"galaxies_a": 10**24, "galaxies_b": 10**12, "rule": "fnc", "size_penalized_prior": False},
            [
                _exp(Fraction(10**12), "bigger universe favoured by a trillion"),
                _exp(Fraction(1), "prior penalized by size", size_penalized_prior=True),
                _exp(Fraction(1), "SSA-SIA ignores size", rule="ssa"),
            ],
        ),
        CatalogEntry(
            "recalculation",
            "odds(first count wrong)",
            recalculation_odds,
            {"prior_odds": Fraction(1, 10), "error_rate": Fraction(1, 10), "planet_ratio": 10**6, "rule": "ordinary"},
            [
                _exp(Fraction(1), "ordinary updating after a divergent recalculation"),
                _exp(Fraction(10**6), "FNC after a divergent recalculation", rule="fnc"),
            ],
        ),
        CatalogEntry(
            "fermi_analytic",
            "value",
            fermi_analytic,
            {"quantity": "posterior_mean", "factor": "p"},
            [
                _exp(0.041, "prior p1, lower end of 95% interval", 0.015, quantity="prior_lower"),
                _exp(0.247, "prior p1, upper end of 95% interval", 0.005, quantity="prior_upper"),
                _exp(0.111, "prior p1 mean", 0.005, quantity="prior_mean"),
                _exp(0.1236, "posterior p1 median, no interference", 5e-4, quantity="posterior_median"),
                _exp(0.2, "posterior p1 sd10, no interference", 1e-9, quantity="posterior_sd10"),
                _exp(0.050, "posterior p1, lower end of 95% interval", 0.01, quantity="posterior_lower"),
                _exp(0.305, "posterior p1, upper end of 95% interval", 0.005, quantity="posterior_upper"),
                _exp(0.137, "posterior p1 mean, no interference", 0.005, quantity="posterior_mean"),
                _exp(0.111, "posterior f1 mean, no interference", 0.005, quantity="posterior_mean", factor="f"),
                _exp(5.0, "p spans about 10^5", 0.05, quantity="span_log10"),
                _exp(3.0, "f spans about 10^3", 0.05, quantity="span_log10", factor="f"),
            ],
        ),
    ]
    return {e.name: e for e in entries}


CATALOG = _build_catalog()

###############################################################################


def _coerce_param(name: str, key: str, default, value):
    """Integer parameters take any exact integer, 10^11 or 2e11 included."""
    if isinstance(default, bool) or not isinstance(default, int) or isinstance(value, bool):
        return value
    if isinstance(value, (Fraction, Magnitude)):
        exact = as_exact(value)
        if exact.denominator != 1:
            raise DomainError(f"entry '{name}': parameter {key} must be an integer, got {value!r}")
        return int(exact)
    return value


def run_entry(name: str, **overrides):
    """Run a catalog entry with its default parameters, updated by overrides."""
    if name not in CATALOG:
        raise DomainError(f"unknown catalog entry '{name}'")
    entry = CATALOG[name]
    unknown = set(overrides) - set(entry.params)
    if unknown:
        raise DomainError(f"entry '{name}' has no parameter(s) {sorted(unknown)}")
    overrides = {k: _coerce_param(name, k, entry.params[k], v) for k, v in overrides.items()}
    return entry.builder(**{**entry.params, **overrides})


def matches(got, expected, tolerance: float = 0.0) -> bool:
    """
    Compare a result with its expected value.

    Magnitudes compare in log10 with absolute tolerance; exact Fractions
    with zero tolerance need an exact Fraction result; other numbers use
    relative tolerance.
    """
    if isinstance(expected, Magnitude):
        return as_magnitude(got).isclose(expected, abs_tol=max(tolerance, 1e-9))
    if isinstance(expected, Fraction) and tolerance == 0:
        return isinstance(got, (int, Fraction)) and got == expected
    if isinstance(expected, (int, float, Fraction)):
        return math.isclose(to_float(got), float(expected), rel_tol=tolerance)
    return got == expected


def check_entry(name: str) -> list[CheckOutcome]:
    entry = CATALOG[name]
    out = []
    for ex in entry.expected:
        got = run_entry(name, **ex.kwargs)
        ok = matches(got, ex.value, ex.tolerance)
        if not ok:
            logger.warning("%s %s: got %s, expected %s", name, ex.kwargs, got, ex.value)
        out.append(CheckOutcome(name, ex.kwargs, ok, got, ex.value, ex.source))
    return out


def check_catalog(names: Optional[list[str]] = None) -> list[CheckOutcome]:
    """Run every expected result of the given (default: all) entries."""
    out = []
    for name in names or list(CATALOG):
        out.extend(check_entry(name))
    return out
