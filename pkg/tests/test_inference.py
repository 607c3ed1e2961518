# -*- coding: utf-8 -*-

import itertools
import math
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from pyanthropic import inference as inf
from pyanthropic.errors import (
    ContradictionError,
    DomainError,
    InconsistentScenarioError,
    RegimeViolationError,
)
from pyanthropic.inference import EvidenceSet, Hypothesis, ReferenceClass, Scenario
from pyanthropic.numerics import Magnitude

HALF = Fraction(1, 2)


def coin(d_counts, classes, epsilon=None):
    return Scenario(
        [Hypothesis("H", HALF), Hypothesis("T", HALF)],
        [ReferenceClass(k, v) for k, v in classes.items()],
        EvidenceSet(counts=d_counts, epsilon=epsilon),
    )


def random_scenario(rng: np.random.Generator, n_classes: int = 2) -> Scenario:
    k = int(rng.integers(3, 6))
    names = [f"h{i}" for i in range(k)]
    w = [int(v) for v in rng.integers(1, 100, size=k)]
    priors = [Fraction(v, sum(w)) for v in w]
    d = {h: int(v) for h, v in zip(names, rng.integers(1, 20, size=k))}
    classes = [
        ReferenceClass(f"c{j}", {h: d[h] + int(rng.integers(0, 51)) for h in names})
        for j in range(n_classes)
    ]
    return Scenario([Hypothesis(h, p) for h, p in zip(names, priors)], classes, EvidenceSet(counts=d))


class TestScenario(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        # to run before all tests
        print("\ntesting pyanthropic.inference...")

    @classmethod
    def tearDownClass(cls):
        # to run after all tests
        pass

    def setUp(self):
        # to run before each test
        pass

    def tearDown(self):
        # to run after each test
        pass

    def test_valid(self):
        s = coin({"H": 1, "T": 2}, {"c": {"H": 1, "T": 2}})
        self.assertEqual(s.names, ["H", "T"])
        self.assertEqual(s.priors, {"H": HALF, "T": HALF})
        self.assertEqual(s.get_class("c").counts["T"], 2)

    def test_invalid(self):
        cases = [
            # priors do not sum to 1
            lambda: Scenario(
                [Hypothesis("H", Fraction(9, 20)), Hypothesis("T", Fraction(9, 20))],
                [],
                EvidenceSet(counts={"H": 1, "T": 1}),
            ),
            # duplicate hypothesis
            lambda: Scenario(
                [Hypothesis("H", HALF), Hypothesis("H", HALF)], [], EvidenceSet(counts={"H": 1})
            ),
            # class misses a hypothesis
            lambda: coin({"H": 1, "T": 1}, {"c": {"H": 1}}),
            # negative count
            lambda: coin({"H": 1, "T": 1}, {"c": {"H": 1, "T": -1}}),
            # |D| > |C| in a class containing D
            lambda: coin({"H": 2, "T": 1}, {"c": {"H": 1, "T": 1}}),
            # no evidence at all
            lambda: coin(None, {}),
            # epsilon above 1
            lambda: coin(None, {}, epsilon={"H": 2, "T": 1}),
        ]
        for make in cases:
            with self.assertRaises(InconsistentScenarioError):
                make()

    def test_float_priors_tolerance(self):
        s = Scenario(
            [Hypothesis("a", 0.1), Hypothesis("b", 0.2), Hypothesis("c", 0.7)],
            [],
            EvidenceSet(counts={"a": 1, "b": 1, "c": 1}),
        )
        self.assertEqual(len(s.names), 3)

    def test_unknown_class(self):
        s = coin({"H": 1, "T": 1}, {"c": {"H": 1, "T": 1}})
        with self.assertRaises(InconsistentScenarioError):
            inf.ssa_posterior(s, "nope")
        with self.assertRaises(DomainError):
            inf.apply_rule(s, "bayes", "c")


class TestRules(unittest.TestCase):
    def test_ssa_doomsday(self):
        post = inf.doomsday_posterior({10**11: HALF, 10**14: HALF}, 6 * 10**10)
        self.assertEqual(post.probs[10**14], Fraction(1, 1001))
        self.assertAlmostEqual(float(post.probs[10**14]), 0.000999001, places=9)
        self.assertEqual(post.odds(10**14, 10**11), Fraction(1, 1000))
        self.assertEqual(post.mode, "exact")

    def test_ssa_equal_ratios_keep_prior(self):
        s = coin({"H": 1, "T": 3}, {"c": {"H": 2, "T": 6}})
        self.assertEqual(inf.ssa_posterior(s, "c").probs, {"H": HALF, "T": HALF})

    def test_ssa_enumeration(self):
        # (hypothesis, sampled observer) pairs, observers 0..|C|-1, the first |D| in the evidence set
        priors = {"a": Fraction(1, 5), "b": Fraction(3, 10), "c": HALF}
        C = {"a": 4, "b": 7, "c": 3}
        D = {"a": 2, "b": 1, "c": 3}
        s = Scenario(
            [Hypothesis(h, p) for h, p in priors.items()],
            [ReferenceClass("C", C)],
            EvidenceSet(counts=D),
        )
        joint = {h: Fraction(0) for h in priors}
        for h in priors:
            for obs in range(C[h]):
                if obs < D[h]:
                    joint[h] += priors[h] / C[h]
        total = sum(joint.values())
        expected = {h: v / total for h, v in joint.items()}
        self.assertEqual(inf.ssa_posterior(s, "C").probs, expected)

    def test_zero_observer_hypothesis(self):
        s = coin({"H": 0, "T": 1}, {"c": {"H": 0, "T": 1}})
        self.assertEqual(inf.ssa_posterior(s, "c").probs, {"H": 0, "T": 1})
        s = coin({"H": 1, "T": 1}, {"c": {"H": 1, "T": 1}})
        bad = Scenario(
            s.hypotheses,
            [ReferenceClass("c", {"H": 0, "T": 1}, contains_evidence=False)],
            s.evidence,
        )
        with self.assertRaises(InconsistentScenarioError):
            inf.ssa_posterior(bad, "c")

    def test_ssa_sia(self):
        s = coin({"H": 1, "T": 2}, {"wakenings": {"H": 1, "T": 2}, "all": {"H": 10, "T": 30}})
        post = inf.ssa_sia_posterior(s, "all")
        self.assertEqual(post.probs["H"], Fraction(1, 3))
        self.assertEqual([stage.label.split(",")[0] for stage in post.ledger], ["SIA", "SSA"])
        self.assertEqual(post.probs, inf.ssa_sia_posterior(s, "wakenings").probs)
        post = inf.ssa_sia_posterior(
            inf.doomsday_scenario({10**11: HALF, 10**14: HALF}, 6 * 10**10), "all observers"
        )
        self.assertEqual(post.probs, {10**11: HALF, 10**14: HALF})

    def test_ledger_replay(self):
        s = coin({"H": 1, "T": 2}, {"all": {"H": 10, "T": 30}})
        post = inf.update(inf.ssa_sia_posterior(s, "all"), {"H": 1, "T": HALF}, "told Monday")
        self.assertEqual(post.replay(), post.probs)
        rows = post.cumulative_odds("H", "T")
        self.assertEqual(rows[0], ("prior", 1))
        self.assertEqual(rows[-1][1], post.odds("H", "T"))
        self.assertEqual(len(rows), len(post.ledger) + 1)
        with self.assertRaises(DomainError):
            inf.update(post, {"H": -1, "T": 1}, "negative")
        with self.assertRaises(InconsistentScenarioError):
            inf.update(post, {"H": 1}, "partial")

    def test_odds_against_empty_world(self):
        s = coin({"H": 1, "T": 0}, {"all": {"H": 1, "T": 0}})
        post = inf.ssa_posterior(s, "all")
        self.assertEqual(post.probs, {"H": 1, "T": 0})
        self.assertEqual(post.cumulative_odds("H", "T"), [("prior", 1), (post.ledger[0].label, None)])
        self.assertEqual(post.cumulative_odds("T", "H")[-1][1], 0)
        self.assertEqual(post.odds("T", "H"), 0)
        with self.assertRaises(DomainError):
            post.odds("H", "T")
        big = {"all": {"H": Magnitude.power10(400), "T": 0}}
        post = inf.ssa_posterior(coin({"H": 1, "T": 0}, big), "all")
        self.assertEqual(post.mode, "magnitude")
        self.assertIsNone(post.cumulative_odds("H", "T")[-1][1])
        with self.assertRaises(DomainError):
            post.odds("H", "T")

    def test_fnc(self):
        eps = {"A": Fraction(1, 10**9), "B": Fraction(1, 10**9)}
        s = Scenario(
            [Hypothesis("A", HALF), Hypothesis("B", HALF)],
            [ReferenceClass("C", {"A": 2000, "B": 1000})],
            EvidenceSet(epsilon=eps),
        )
        self.assertEqual(inf.fnc_posterior(s, "C", first_order=True).probs["A"], Fraction(2, 3))
        self.assertAlmostEqual(inf.fnc_posterior(s, "C").probs["A"], 2 / 3, delta=1e-6)
        big = Scenario(s.hypotheses, s.classes, EvidenceSet(epsilon={"A": HALF, "B": HALF}))
        with self.assertRaises(RegimeViolationError):
            inf.fnc_posterior(big, "C")
        with self.assertRaises(InconsistentScenarioError):
            inf.fnc_posterior(coin({"H": 1, "T": 1}, {"c": {"H": 1, "T": 1}}), "c")

    def test_fnc_huge_counts(self):
        # 10^600 observers and a 10^-612 match probability stay representable
        s = Scenario(
            [Hypothesis("A", HALF), Hypothesis("B", HALF)],
            [ReferenceClass("C", {"A": Magnitude.power10(600), "B": Magnitude.power10(106)})],
            EvidenceSet(epsilon={"A": Magnitude.power10(-612), "B": Magnitude.power10(-612)}),
        )
        post = inf.fnc_posterior(s, "C")
        self.assertEqual(post.mode, "magnitude")
        self.assertTrue(post.odds("B", "A").isclose(Magnitude.power10(-494), abs_tol=1e-9))

    def test_fnc_matches_ssa_sia(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            k = int(rng.integers(2, 5))
            names = [f"h{i}" for i in range(k)]
            counts = {h: int(c) for h, c in zip(names, rng.integers(1, 10**4, size=k))}
            max_matches = 10.0 ** rng.uniform(-6, -2)
            eps = max_matches / max(counts.values())
            s = Scenario(
                [Hypothesis(h, Fraction(1, k)) for h in names],
                [ReferenceClass("C", counts)],
                EvidenceSet(counts=counts, epsilon=dict.fromkeys(names, eps)),
            )
            fnc = inf.fnc_posterior(s, "C").probs
            sia = inf.ssa_sia_posterior(s, "C").probs
            for h in names:
                rel = abs(fnc[h] - float(sia[h])) / float(sia[h])
                self.assertLessEqual(rel, 2 * max_matches)


class TestReferenceClassInvariance(unittest.TestCase):
    def test_generated_family(self):
        rng = np.random.default_rng(2024)
        ssa_differs = 0
        for _ in range(1000):
            s = random_scenario(rng)
            a, b = inf.ssa_sia_posterior(s, "c0"), inf.ssa_sia_posterior(s, "c1")
            self.assertEqual(a.probs, b.probs)
            self.assertEqual(a.mode, "exact")
            if inf.ssa_posterior(s, "c0").probs != inf.ssa_posterior(s, "c1").probs:
                ssa_differs += 1
        self.assertGreater(ssa_differs, 900)


class TestRecruitment(unittest.TestCase):
    def test_invalid_update(self):
        post = inf.recruitment_invalid_update(20, 3)
        self.assertAlmostEqual(float(post.probs[1]), 0.0093, delta=5e-5)
        self.assertAlmostEqual(float(post.probs[20]), 0.0690, delta=5e-5)
        self.assertEqual(post.ledger[-1].note, "known-invalid (pedagogical)")
        self.assertEqual(inf.recruitment_invalid_update(1, 3).probs, {1: 1})

    def test_invalid_update_enumeration(self):
        # seq_len 1: the sequence is a single Heads; count outcomes where some subject saw it
        pool_max = 5
        weights = {}
        for n in range(1, pool_max + 1):
            hits = sum(any(o) for o in itertools.product((True, False), repeat=n))
            weights[n] = Fraction(hits, 2**n)
        total = sum(weights.values())
        expected = {n: w / total for n, w in weights.items()}
        self.assertEqual(inf.recruitment_invalid_update(pool_max, 1).probs, expected)

    def test_indexical_update(self):
        post = inf.recruitment_indexical_update(20)
        self.assertEqual(post.probs[1], Fraction(1, 210))
        self.assertEqual(post.probs[20], Fraction(20, 210))
        self.assertAlmostEqual(float(post.probs[1]), 0.0048, delta=5e-5)
        self.assertAlmostEqual(float(post.probs[20]), 0.0952, delta=5e-5)
        self.assertEqual(inf.recruitment_indexical_update(1).probs, {1: 1})

    def test_indexical_equals_fnc(self):
        indexical = inf.recruitment_indexical_update(20).probs
        for eps in (Fraction(1, 10**6), Fraction(1, 10**9)):
            s = inf.recruitment_scenario(20, eps)
            self.assertEqual(inf.fnc_posterior(s, "recruits", first_order=True).probs, indexical)
            full = inf.fnc_posterior(s, "recruits").probs
            for n, p in indexical.items():
                self.assertAlmostEqual(full[n], float(p), delta=1e-4 * float(p))

    def test_bad_arguments(self):
        with self.assertRaises(DomainError):
            inf.recruitment_invalid_update(0, 3)
        with self.assertRaises(DomainError):
            inf.recruitment_indexical_update(2.5)


class TestCompanions(unittest.TestCase):
    def test_own_class_examples(self):
        self.assertEqual(inf.companion_odds("X", (1, 2, 3, 1), own_class_only=True), 3)
        self.assertEqual(inf.companion_odds("Y", (4, 4, 9, 9), own_class_only=True), 1)
        self.assertEqual(inf.companion_odds("X", (4, 4, 9, 9), own_class_only=True), 1)
        with self.assertRaises(DomainError):
            inf.companion_odds("X", (0, 1, 1, 1), own_class_only=True)
        with self.assertRaises(DomainError):
            inf.companion_odds("Z", (1, 1, 1, 1), own_class_only=True)

    def test_random_tuples(self):
        rng = np.random.default_rng(7)
        own_disagree = 0
        for _ in range(10**4):
            counts = tuple(int(v) for v in rng.integers(1, 1000, size=4))
            x_a, y_a, x_b, y_b = counts
            cx = inf.companion_odds("X", counts, own_class_only=False)
            cy = inf.companion_odds("Y", counts, own_class_only=False)
            self.assertEqual(cx, cy)
            ox = inf.companion_odds("X", counts, own_class_only=True)
            oy = inf.companion_odds("Y", counts, own_class_only=True)
            self.assertEqual(ox, min(1, Fraction(y_a, x_a)) / min(1, Fraction(y_b, x_b)))
            self.assertEqual(oy, min(1, Fraction(x_a, y_a)) / min(1, Fraction(x_b, y_b)))
            if ox != oy:
                own_disagree += 1
        self.assertGreater(own_disagree, 0)

    @settings(max_examples=200)
    @given(st.tuples(*[st.integers(min_value=1, max_value=10**6)] * 4))
    def test_ssa_sia_is_type_independent(self, counts):
        x_a, y_a, x_b, y_b = counts
        expected = Fraction(min(x_a, y_a), min(x_b, y_b))
        self.assertEqual(inf.companion_odds("X", counts, True, rule="ssa+sia"), expected)
        self.assertEqual(inf.companion_odds("Y", counts, False, rule="ssa+sia"), expected)
        self.assertEqual(inf.companion_odds("X", counts, True, rule="fnc"), expected)


class TestDoomsday(unittest.TestCase):
    prior = {10**11: HALF, 10**14: HALF}

    def test_doomsday(self):
        post = inf.doomsday_posterior(self.prior, 6 * 10**10)
        self.assertEqual(post.odds(10**14, 10**11), Fraction(1, 1000))
        self.assertEqual(post.probs[10**14], Fraction(1, 1001))
        revised = {2 * 10**11: HALF, 10**14: HALF}
        self.assertEqual(inf.doomsday_posterior(revised, 16 * 10**10).odds(10**14, 2 * 10**11), Fraction(1, 500))
        self.assertEqual(inf.doomsday_posterior({10**12: 1}, 5).probs, {10**12: 1})
        with self.assertRaises(ContradictionError):
            inf.doomsday_posterior(self.prior, 10**15)

    def test_nodoom(self):
        self.assertEqual(inf.nodoom_posterior(self.prior, 6 * 10**10).probs, self.prior)
        post = inf.nodoom_posterior({10: Fraction(1, 4), 20: Fraction(1, 4), 30: HALF}, 15)
        self.assertEqual(post.probs, {10: 0, 20: Fraction(1, 3), 30: Fraction(2, 3)})

    @settings(max_examples=1000)
    @given(
        st.dictionaries(
            st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=100), min_size=1, max_size=6
        ),
        st.integers(min_value=1, max_value=10**6),
    )
    def test_sia_cancels_doomsday(self, weights, r):
        if max(weights) < r:
            r = max(weights)
        total = sum(weights.values())
        prior = {n: Fraction(w, total) for n, w in weights.items()}
        lhs = inf.doomsday_posterior(inf.sia_reweight(prior), r).probs
        self.assertEqual(lhs, inf.nodoom_posterior(prior, r).probs)
        self.assertEqual(inf.generalized_doomsday(prior, r).probs, inf.doomsday_posterior(prior, r).probs)

    def test_jupiter(self):
        post = inf.generalized_doomsday({10**12: HALF, 10**16: HALF}, 10**12)
        self.assertEqual(post.odds(10**16, 10**12), Fraction(1, 10000))

    def test_sia_reweight_magnitudes(self):
        out = inf.sia_reweight({10: 0.5, 10**400: 0.5})
        self.assertAlmostEqual(out[10**400], 1.0)
        self.assertTrue(math.isclose(sum(out.values()), 1.0))


if __name__ == "__main__":
    unittest.main()
