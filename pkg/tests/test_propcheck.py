import json

import numpy as np
import pytest

from nframes import operators as ops
from nframes.controlled import controlled_bounds
from nframes.propcheck import (
    CONTROL_KINDS,
    PASS,
    SKIPPED,
    THEOREM_IDS,
    InstanceSpec,
    generate,
    generate_dsum,
    generate_tight,
    make_control,
    random_spec,
    reports_to_json,
    run_suite,
    run_theorem,
    run_trial,
)
from nframes.rng import CounterRNG


def test_theorem_ids_each_once():
    assert len(set(THEOREM_IDS)) == len(THEOREM_IDS) == 16
    assert THEOREM_IDS[0] == "R3.2" and THEOREM_IDS[-1] == "T4.15"


class TestInstanceSpec:
    def test_valid(self):
        spec = InstanceSpec(0, 5, 3, 4, "identity")
        assert spec.quotient_dim == 3

    @pytest.mark.parametrize(
        "args",
        [(-1, 4, 2, 3, "identity"), (0, 9, 2, 8, "identity"), (0, 3, 4, 3, "identity"),
         (0, 4, 2, 2, "identity"), (0, 4, 2, 11, "identity"), (0, 4, 2, 3, "nope")],
    )
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            InstanceSpec(*args)

    def test_random_specs_in_range(self):
        for k in range(200):
            spec = random_spec(CounterRNG(3, "spec", k), 3, "scalar")
            assert 2 <= spec.ambient_dim <= 8 and 2 <= spec.order <= min(4, spec.ambient_dim)


class TestGenerators:
    def test_deterministic(self):
        spec = InstanceSpec(11, 6, 3, 7, "random_positive")
        a, b = generate(spec), generate(spec)
        np.testing.assert_array_equal(a.frame.projected, b.frame.projected)
        np.testing.assert_array_equal(a.control, b.control)

    @pytest.mark.parametrize("kind", CONTROL_KINDS)
    def test_control_kinds(self, kind):
        for k in range(20):
            rng = CounterRNG(5, kind, k)
            cf = generate(random_spec(rng, 5, kind), rng)
            r = ops.classify(cf.control)
            assert r.invertible
            if kind != "random_invertible":
                assert r.positive
            if kind in ("identity", "scalar", "polynomial_in_SF"):
                assert ops.commutes(cf.control, cf.frame_operator)

    def test_deficient_family_is_not_a_frame(self):
        rng = CounterRNG(1, "deficient")
        cf = generate(InstanceSpec(1, 5, 2, 6, "identity"), rng, deficient=True)
        assert not controlled_bounds(cf).is_controlled_frame

    def test_tight(self):
        rng = CounterRNG(2, "tight")
        cf = generate_tight(InstanceSpec(2, 6, 2, 8, "identity"), rng)
        lam = np.linalg.eigvalsh(cf.frame_operator)
        assert lam[-1] - lam[0] < 1e-10

    def test_paired_dsum_lengths_match(self):
        for k in range(30):
            dsf = generate_dsum(0, CounterRNG(0, "dsum", k), "identity", "paired")
            assert len(dsf.left.frame) == len(dsf.right.frame)

    def test_make_control_unknown(self):
        with pytest.raises(ValueError):
            make_control("other", np.eye(2), CounterRNG(0))


class TestRunner:
    def test_trial_is_order_independent(self):
        a = run_trial("T3.10", 4, 7)
        run_trial("T3.10", 4, 3)
        assert run_trial("T3.10", 4, 7) == a

    def test_report_fields_and_json(self):
        rep = run_theorem("P4.4", 0, 5)
        assert rep.theorem_id == "P4.4" and rep.trials == 5 and rep.failures == 0 and rep.status == PASS
        data = json.loads(reports_to_json([rep]))
        assert set(data[0]) == {"theorem_id", "trials", "failures", "worst_residual", "status"}

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            run_suite(0, 0)
        with pytest.raises(ValueError):
            run_theorem("T3.5", 0, 0)
        with pytest.raises(KeyError):
            run_theorem("T9.9", 0, 3)
        with pytest.raises(ValueError):
            run_theorem("T3.5", 0, 3, "nope")

    def test_non_commuting_parsevalize_trials_skip(self):
        results = [run_trial("T3.8", 0, k, "random_positive") for k in range(40)]
        assert any(r is None for r in results)
        rep = run_theorem("T3.8", 0, 40, "random_positive")
        assert rep.status in (PASS, SKIPPED) and rep.failures == 0

    def test_all_skipped_status(self):
        # a non-positive control is outside the synthesis-norm hypotheses
        rep = run_theorem("T3.5", 0, 5, "random_invertible")
        assert rep.status == SKIPPED and rep.failures == 0

    def test_suite_deterministic_and_passing(self):
        a = reports_to_json(run_suite(0, 10))
        assert a == reports_to_json(run_suite(0, 10))
        assert all(r["status"] == PASS for r in json.loads(a))

    @pytest.mark.parametrize("kind", CONTROL_KINDS)
    def test_no_failures_for_any_kind(self, kind):
        for tid in THEOREM_IDS:
            assert run_theorem(tid, 1, 8, kind).failures == 0, tid
