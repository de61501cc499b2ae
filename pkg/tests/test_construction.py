from fractions import Fraction

from pydantic import ValidationError
import pytest

from src.construction import (
    BoundMode,
    Constraint,
    ConstructionConfig,
    build_prefix,
    choose_K,
    choose_M,
    choose_N,
    choose_S,
    collect_constraints,
    derive_stage_parameters,
    run_stage,
    union_bound,
    verify_construction,
)
from src.hypergeom import HypergeomParams, stage_generator, tail_leq
from src.intervals import IntervalScheme, interval_bounds
from src.numeric import SetPrefix
from src.reductions import ReductionSpec
from src.utils.errors import ConstructionAborted, ParameterError, SelectionFailure

IDENTITY = ReductionSpec.parse("x")


def make_config(**overrides) -> ConstructionConfig:
    values = {
        "p": "1/4",
        "epsilons": ["3/10", "3/20"],
        "set_family": ["0"],
        "reductions": ["x"],
        "stages": 1,
        "n_horizon": 16,
        "seed": 1,
    }
    values.update(overrides)
    return ConstructionConfig(**values)


class TestConfig:
    def test_reads_yaml(self, reference_config):
        assert reference_config.p == Fraction(1, 4)
        assert [str(f) for f in reference_config.reductions] == ["x", "(x / 2)", "[1, 0, 2] then (x % 3)"]
        assert reference_config.bound_mode is BoundMode.EXACT_FINITE

    def test_epsilon_schedule_extends_geometrically(self):
        config = make_config()
        assert [config.epsilon(stage) for stage in range(4)] == [
            Fraction(3, 10), Fraction(3, 20), Fraction(3, 40), Fraction(3, 80),
        ]

    def test_sets_cycle(self, reference_config):
        assert [reference_config.set_for_stage(stage).text for stage in range(4)] == ["0", "1", "((x + 1) % 2)", "0"]

    @pytest.mark.parametrize(
        "overrides",
        [
            {"epsilons": ["3/10", "3/10"]},
            {"epsilons": ["1/10", "3/20"]},
            {"epsilons": ["0"]},
            {"p": "3/5"},
            {"reductions": ["x / 2"]},
            {"epsilon_ratio": "1"},
            {"set_family": ["x % 3"]},
            {"reductions": ["x", "x / 0"]},
        ],
    )
    def test_rejects_invalid_configs(self, overrides):
        with pytest.raises(ValidationError):
            make_config(**overrides)

    def test_smallness_is_enforced_on_request(self):
        make_config()
        with pytest.raises(ValidationError):
            make_config(enforce_smallness=True)
        make_config(p="1/4", epsilons=["1/5"], enforce_smallness=True)

    @pytest.mark.parametrize("p, label", [("0", "vacuous"), ("1/2", "extension"), ("1/4", None)])
    def test_endpoint_labels(self, p, label):
        assert make_config(p=p, epsilons=["1/5"]).endpoint_label == label


class TestStageParameters:
    def test_hoeffding_cutoff(self):
        assert choose_M(1, 0, Fraction(3, 10), 0, BoundMode.HOEFFDING) == 135

    def test_first_stage_cutoff_is_only_monotone(self):
        assert choose_M(0, 0, Fraction(3, 10), 0, BoundMode.HOEFFDING) == 1
        assert choose_M(0, 7, Fraction(1, 2), 3, BoundMode.HOEFFDING) == 14
        assert choose_M(0, 7, Fraction(1, 2), 20, BoundMode.HOEFFDING) == 21

    def test_cutoff_dominates_prefix_length(self):
        assert choose_M(1, 1000, Fraction(1, 10), 0, BoundMode.HOEFFDING) >= 10000
        assert choose_M(1, 1000, Fraction(1, 10), 0) == 10000

    @pytest.mark.parametrize(
        "reductions, M, L, expected",
        [
            ([ReductionSpec.parse("0")], 6, 1, 1),
            ([IDENTITY], 1, 0, 1),
            ([IDENTITY], 5, 3, 7),
            ([IDENTITY, ReductionSpec.parse("x * 3")], 5, 3, 25),
        ],
    )
    def test_zero_block_length(self, reductions, M, L, expected):
        assert choose_K(len(reductions) - 1, M, L, reductions) == expected

    def test_zero_block_ignores_later_reductions(self):
        assert choose_K(0, 5, 3, [IDENTITY, ReductionSpec.parse("x * 3")]) == 7

    def test_window_length(self):
        assert choose_N(60, 40, Fraction(1, 4), Fraction(1, 10)) == 550

    @pytest.mark.parametrize("p, epsilon", [(Fraction(1, 4), Fraction(1, 10)), (Fraction(0), Fraction(3, 10))])
    def test_window_length_without_prefix(self, p, epsilon):
        n = choose_N(0, 0, p, epsilon)
        satisfied = [m for m in range(1, n + 1) if (p + epsilon) * m // 1 >= (p + epsilon / 2) * m]
        assert satisfied and satisfied[0] == n

    def test_window_inequalities_hold(self):
        p, eps = Fraction(2, 5), Fraction(3, 20)
        n = choose_N(123, 45, p, eps)
        assert (168 + (p + eps) * n) / (168 + n) <= p + 2 * eps
        assert Fraction((p + eps) * n // 1, n) - p >= eps / 2
        assert (168 + (p + eps) * (n - 1)) / (168 + n - 1) > p + 2 * eps or \
            Fraction((p + eps) * (n - 1) // 1, n - 1) - p < eps / 2

    def test_constraints_need_an_odd_image_in_the_window(self):
        eps = Fraction(3, 10)
        assert collect_constraints(0, 4, range(0, 10), [ReductionSpec.parse("0")], eps, 4) == []
        assert collect_constraints(0, 1, range(100, 110), [IDENTITY], eps, 10) == []
        constraints = collect_constraints(0, 1, range(1, 3), [IDENTITY], eps, 16)
        assert constraints == [Constraint(n=2, e=0, j_star=[1, 2], outside_count=0)]

    @pytest.mark.parametrize("M, window", [(1, range(1, 3)), (4, range(7, 40)), (20, range(190, 760)), (3, range(500, 600))])
    def test_identity_constraints_are_the_intervals_meeting_the_window(self, M, window):
        eps, horizon = Fraction(3, 20), 40
        expected = []
        for n in range(M, horizon + 1):
            span = interval_bounds(IntervalScheme.TRIANGULAR, n)
            inside = sum(1 for y in span if y in window)
            if inside:
                expected.append(Constraint(n=n, e=0, j_star=list(span), outside_count=n - inside))
        assert collect_constraints(0, M, window, [IDENTITY], eps, horizon) == expected

    def test_constraints_are_ordered_and_thread_independent(self, reference_config):
        reductions = reference_config.reductions
        window = range(190, 760)
        single = collect_constraints(1, 20, window, reductions, Fraction(3, 20), 256)
        threaded = collect_constraints(1, 20, window, reductions, Fraction(3, 20), 256, workers=4)
        assert single == threaded
        assert [(c.e, c.n) for c in single] == sorted((c.e, c.n) for c in single)
        assert all(c.e <= 1 for c in single)

    def test_reference_first_stage(self, reference_config):
        params = derive_stage_parameters(0, 0, 0, reference_config)
        assert (params.M, params.K, params.N, params.r) == (1, 1, 2, 1)
        assert params.window == range(1, 3)
        assert [(c.e, c.n) for c in params.constraints] == [(0, 2)]
        assert params.union_bound == 0

    def test_reference_second_stage_is_certified(self, reference_config):
        params = derive_stage_parameters(1, 3, 1, reference_config)
        assert params.M >= 20
        assert params.union_bound < 1
        assert params.union_bound == union_bound(params.constraints, params.N, params.r, reference_config.p)
        assert params.r == (reference_config.p + Fraction(3, 20)) * params.N // 1
        assert params.window.start == 3 + params.K

    @pytest.mark.parametrize(
        "j_star, outside, p",
        [(list(range(8)), 0, Fraction(1, 2)), (list(range(8)), 0, Fraction(2, 5)), (list(range(-3, 9)), 3, Fraction(1, 3))],
    )
    def test_union_bound_is_the_tail_below_the_quota(self, j_star, outside, p):
        constraint = Constraint(n=len(j_star), e=0, j_star=j_star, outside_count=outside)
        required = constraint.required(p)
        h = HypergeomParams(K=4, N=12, n=constraint.inside_count())
        expected = tail_leq(h, required - 1) if required.denominator == 1 else tail_leq(h, required)
        assert union_bound([constraint], 12, 4, p) == expected


def violates(forcing_set: frozenset[int], constraint: Constraint, p: Fraction) -> bool:
    hits = len(forcing_set & set(constraint.j_star))
    return hits < p * len(constraint.j_star) - constraint.outside_count


class TestForcingSet:
    def test_no_constraints_accepts_first_sample(self):
        forcing_set, retries = choose_S(range(10, 20), 4, [], Fraction(1, 4), stage_generator(0, 0), 10)
        assert retries == 0
        assert len(forcing_set) == 4 and forcing_set <= set(range(10, 20))

    def test_covering_constraint_accepts_any_sample(self):
        window = range(0, 8)
        constraint = Constraint(n=8, e=0, j_star=list(range(-2, 8)), outside_count=2)
        forcing_set, retries = choose_S(window, 3, [constraint], Fraction(1, 2), stage_generator(5, 0), 0)
        assert retries == 0
        assert not violates(forcing_set, constraint, Fraction(1, 2))

    def test_zero_target_accepts_any_sample(self):
        constraint = Constraint(n=5, e=0, j_star=[0, 1, 2, 3, 4], outside_count=0)
        _, retries = choose_S(range(0, 5), 0, [constraint], Fraction(0), stage_generator(1, 0), 0)
        assert retries == 0

    def test_uncertifiable_instance_is_a_parameter_error(self):
        constraint = Constraint(n=4, e=0, j_star=[0, 1, 2, 3], outside_count=0)
        with pytest.raises(ParameterError):
            choose_S(range(0, 4), 1, [constraint], Fraction(1, 2), stage_generator(0, 0), 3)

    def test_exhausted_retries_report_violations(self):
        constraint = Constraint(n=4, e=0, j_star=[0, 1, 2, 3], outside_count=0)
        with pytest.raises(SelectionFailure) as info:
            choose_S(range(0, 4), 1, [constraint], Fraction(1, 2), stage_generator(0, 0), 3, BoundMode.HOEFFDING)
        assert info.value.violated == [constraint]
        assert info.value.retries == 3

    def test_selection_succeeds_across_seeds(self, reference_config):
        p = reference_config.p
        params = derive_stage_parameters(1, 3, 1, reference_config)
        accepted = 0
        for seed in range(100):
            try:
                forcing_set, _ = choose_S(params.window, params.r, params.constraints, p,
                                          stage_generator(seed, 1), 1000)
            except SelectionFailure:
                continue
            accepted += 1
            assert len(forcing_set) == params.r
            assert forcing_set <= set(params.window)
            assert not any(violates(forcing_set, c, p) for c in params.constraints)
        assert accepted >= 99

    def test_mean_retries_stay_within_the_union_bound_estimate(self, reference_config):
        p = reference_config.p
        params = derive_stage_parameters(1, 3, 1, reference_config)
        assert params.union_bound < 1
        retries = []
        for seed in range(100):
            _, rejected = choose_S(params.window, params.r, params.constraints, p, stage_generator(seed, 1), 10_000)
            retries.append(rejected)
        assert Fraction(sum(retries), len(retries)) <= 3 / (1 - params.union_bound)


class TestAssembly:
    def test_empty_set_leaves_ones_off_the_forcing_set(self):
        alpha, beta, record = run_stage(SetPrefix.zeros(0), 0, 0, make_config(set_family=["0"]))
        assert alpha == SetPrefix.zeros(record.K)
        assert beta.count() == record.N - len(record.S)
        assert all(beta[x - record.window_start] == 0 for x in record.S)

    def test_full_set_gives_a_zero_window(self):
        _, beta, record = run_stage(SetPrefix.zeros(0), 0, 0, make_config(set_family=["1"]))
        assert beta == SetPrefix.zeros(record.N)

    def test_window_is_the_complement_of_the_set_off_s(self):
        config = make_config(set_family=["(x + 1) % 2"], p="1/5", epsilons=["1/10"], n_horizon=1)
        prefix = SetPrefix.zeros(1)
        _, beta, record = run_stage(prefix, 0, 0, config)
        forcing = set(record.S)
        for x in record.window:
            expected = 0 if x in forcing else x % 2
            assert beta[x - record.window_start] == expected

    def test_no_stages(self):
        prefix, ledger = build_prefix(make_config(stages=0))
        assert prefix.length == 0 and ledger == []

    def test_failing_stage_keeps_partial_results(self):
        config = make_config(stages=2, max_prefix_bits=10)
        with pytest.raises(ConstructionAborted) as info:
            build_prefix(config)
        assert len(info.value.ledger) == 1
        assert info.value.prefix.length == info.value.ledger[0].checkpoint


class TestReferenceRun:
    def test_layout(self, reference_run):
        prefix, ledger = reference_run
        assert len(ledger) == 2
        assert ledger[0].L == 0 and ledger[1].L == ledger[0].checkpoint
        assert prefix.length == ledger[-1].checkpoint <= 10 ** 7
        assert ledger[1].M > ledger[0].M
        for record in ledger:
            assert prefix.count(record.L, record.L + record.K) == 0
            assert all(prefix[x] == 0 for x in record.S)
            assert record.union_bound < 1

    def test_report_passes(self, reference_run, reference_config):
        prefix, ledger = reference_run
        report = verify_construction(prefix, ledger, reference_config)
        assert report.passed, report.summary()
        present = {clause.clause for clause in report.clauses}
        assert {"structural", "a", "a-chain", "b", "c", "d**"} <= present
        assert report.count("fail") == 0

    def test_thread_count_does_not_change_the_result(self, reference_run, reference_config):
        prefix, ledger = build_prefix(reference_config.model_copy(update={"workers": 4}))
        assert prefix == reference_run[0]
        assert ledger == reference_run[1]

    def test_same_seed_same_prefix(self, reference_run, reference_config):
        prefix, ledger = build_prefix(reference_config)
        assert prefix.bits.tobytes() == reference_run[0].bits.tobytes()
        assert [r.model_dump_json() for r in ledger] == [r.model_dump_json() for r in reference_run[1]]

    @pytest.mark.parametrize("name, label", [("reference_p0.yaml", "vacuous"), ("reference_p2_5.yaml", None)])
    def test_other_targets_pass(self, construction_dir, name, label):
        config = ConstructionConfig.from_yaml(construction_dir / name)
        prefix, ledger = build_prefix(config)
        report = verify_construction(prefix, ledger, config)
        assert report.passed, report.summary()
        assert report.label == label
        if label == "vacuous":
            assert report.count("vacuous") > 0


def test_verifier_flags_a_tampered_prefix():
    config = make_config()
    prefix, ledger = build_prefix(config)
    bits = prefix.bits.copy()
    bits[ledger[0].L] ^= 1  # first alpha position
    report = verify_construction(SetPrefix(bits), ledger, config)
    assert not report.passed
    assert [failure.clause for failure in report.failures()] == ["structural"]
    assert "FAILED structural" in report.summary()


def test_verifier_flags_a_wrong_ledger():
    config = make_config()
    prefix, ledger = build_prefix(config)
    record = ledger[0]
    forged = record.model_copy(update={"S": [], "r": 0})
    report = verify_construction(prefix, [forged], config)
    assert not report.passed
    assert any(f.clause == "structural" for f in report.failures())
