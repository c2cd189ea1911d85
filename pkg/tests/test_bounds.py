import numpy as np
import pytest

from qcausal import bounds, geometry as geo, qmath
from qcausal import correlation as corr
from qcausal.errors import ValidationError
from qcausal.samplers import SamplerConfig

CC_MAX = 1 / 27
DC_MIN = -1 / 27


def witness_value(report):
    if report.target.startswith("CC"):
        return corr.statistic_c(corr.cc_pvector(qmath.projector(report.witness_object)))
    return corr.statistic_c(corr.dc_pvector(report.witness_object))


class TestGrid:
    def test_dc_min(self):
        report = bounds.grid_extremum(geo.tdc(), "MIN", 0.01)
        assert abs(report.value - DC_MIN) <= 1e-3
        np.testing.assert_allclose(sorted(report.witness), [0, 1 / 3, 1 / 3, 1 / 3], atol=0.02)

    def test_cc_max(self):
        report = bounds.grid_extremum(geo.tcc(), "MAX", 0.01)
        assert abs(report.value - CC_MAX) <= 1e-3

    def test_cc_min_exact_at_vertex(self):
        report = bounds.grid_extremum(geo.tcc(), "MIN", 0.01)
        assert report.value == -1.0
        assert sorted(report.witness) == [0, 0, 0, 1]

    def test_dc_max_exact_at_vertex(self):
        report = bounds.grid_extremum(geo.tdc(), "MAX", 0.01)
        assert report.value == 1.0

    def test_step_validation(self):
        with pytest.raises(ValidationError):
            bounds.grid_extremum(geo.tcc(), "MAX", 0.5)
        with pytest.raises(ValidationError):
            bounds.grid_extremum(geo.tcc(), "UP", 0.01)

    def test_witness_object_reproduces_value(self):
        for tetra, direction in [(geo.tcc(), "MAX"), (geo.tdc(), "MIN")]:
            report = bounds.grid_extremum(tetra, direction, 0.02)
            assert abs(witness_value(report) - report.value) <= 1e-8


class TestPolish:
    def test_cc_max_to_high_accuracy(self):
        report = bounds.polish_extremum(bounds.grid_extremum(geo.tcc(), "MAX", 0.01))
        assert abs(report.value - CC_MAX) <= 1e-8
        assert report.converged

    def test_dc_min_to_high_accuracy(self):
        report = bounds.polish_extremum(bounds.grid_extremum(geo.tdc(), "MIN", 0.01))
        assert abs(report.value - DC_MIN) <= 1e-8

    def test_vertex_start_already_extremal(self):
        report = bounds.grid_extremum(geo.tcc(), "MIN", 0.01)
        polished = bounds.polish_extremum(report)
        assert polished.value == -1.0
        np.testing.assert_allclose(polished.witness, report.witness, atol=1e-12)

    def test_never_worsens(self):
        for tetra, direction in [(geo.tcc(), "MAX"), (geo.tcc(), "MIN"),
                                 (geo.tdc(), "MAX"), (geo.tdc(), "MIN")]:
            coarse = bounds.grid_extremum(tetra, direction, 0.1)
            polished = bounds.polish_extremum(coarse)
            if direction == "MAX":
                assert polished.value >= coarse.value - 1e-15
            else:
                assert polished.value <= coarse.value + 1e-15


class TestMultistartState:
    def test_max_reaches_bound(self):
        report = bounds.multistart_state_extremum("MAX", 100, SamplerConfig(seed=70))
        assert abs(report.value - CC_MAX) <= 1e-6

    def test_min_reaches_bell_floor(self):
        report = bounds.multistart_state_extremum("MIN", 100, SamplerConfig(seed=71))
        assert abs(report.value - (-1.0)) <= 1e-9

    def test_witness_consistency(self):
        report = bounds.multistart_state_extremum("MAX", 50, SamplerConfig(seed=72))
        assert abs(witness_value(report) - report.value) <= 1e-10
        point = corr.cc_pvector(qmath.projector(report.witness_object)).as_array()
        assert geo.contains(geo.tcc(), point, 1e-9)

    def test_published_witness_state(self):
        # the quoted maximizer, read in the computational basis, hits the bound
        state = np.array([-2, 1, -1, 0], dtype=complex) / np.sqrt(6)
        value = corr.statistic_c(corr.cc_pvector(qmath.projector(state)))
        assert abs(value - CC_MAX) <= 1e-10
        # the entangled-basis reading does not (documented resolution)
        alt = sum(c * qmath.bell(j) for j, c in enumerate(state, start=1))
        alt_value = corr.statistic_c(corr.cc_pvector(qmath.projector(alt)))
        assert abs(alt_value - (-4 / 27)) <= 1e-10


class TestMultistartUnitary:
    def test_min_reaches_bound(self):
        report = bounds.multistart_unitary_extremum("MIN", 100, SamplerConfig(seed=73))
        assert abs(report.value - DC_MIN) <= 1e-6

    def test_max_at_pauli_vertex(self):
        report = bounds.multistart_unitary_extremum("MAX", 100, SamplerConfig(seed=74))
        assert abs(report.value - 1.0) <= 1e-9
        point = corr.dc_pvector(report.witness_object).as_array()
        distances = np.abs(geo.tdc().vertices - point).max(axis=1)
        assert distances.min() <= 1e-4

    def test_agrees_with_grid(self):
        grid = bounds.grid_extremum(geo.tdc(), "MIN", 0.01)
        multi = bounds.multistart_unitary_extremum("MIN", 60, SamplerConfig(seed=75))
        assert multi.value >= grid.value - 1e-3

    def test_witness_in_tetrahedron(self):
        report = bounds.multistart_unitary_extremum("MIN", 40, SamplerConfig(seed=76))
        point = corr.dc_pvector(report.witness_object).as_array()
        assert geo.contains(geo.tdc(), point, 1e-9)
        assert abs(witness_value(report) - report.value) <= 1e-10


class TestOracleAgreement:
    @pytest.mark.parametrize(
        "target,reference",
        [("CC_MAX", CC_MAX), ("CC_MIN", -1.0), ("DC_MAX", 1.0), ("DC_MIN", DC_MIN)],
    )
    def test_both_routes_agree(self, target, reference):
        tetra = geo.tcc() if target.startswith("CC") else geo.tdc()
        direction = target.split("_")[1]
        polished = bounds.polish_extremum(bounds.grid_extremum(tetra, direction, 0.01))
        cfg = SamplerConfig(seed=77)
        if target.startswith("CC"):
            multi = bounds.multistart_state_extremum(direction, 80, cfg)
        else:
            multi = bounds.multistart_unitary_extremum(direction, 80, cfg)
        assert abs(polished.value - multi.value) <= 1e-6
        assert abs(polished.value - reference) <= 1e-6
