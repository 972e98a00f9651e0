import math

import numpy as np
import pytest

from chiral_router import Axis, InvalidSpec, OperatingPoint, SweepSpec, SystemParams, run_sweep
from chiral_router.scattering import observable
from chiral_router.sweep import format_float


def resonance_base(**kw):
    return OperatingPoint(SystemParams.from_chirality(100, 0.5, 2.38, **kw), delta=0.0)


def small_spec(**kw):
    defaults = dict(base=resonance_base(), x_axis=Axis("delta", -1, 1, 2),
                    y_axis=Axis("theta", 0, math.pi, 2), observables=("T_a",))
    defaults.update(kw)
    return SweepSpec(**defaults)


def test_grid_matches_point_queries():
    result = run_sweep(small_spec(observables=("T_a", "I_b")), workers=1)
    assert len(result.rows) == 4
    assert [r[:2] for r in result.rows] == [(-1, 0), (1, 0), (-1, math.pi), (1, math.pi)]
    for x, y, t_a, i_b in result.rows:
        point = resonance_base().with_values((("delta", x), ("theta", y)))
        assert t_a == observable(point, "T_a")
        assert i_b == observable(point, "I_b")


def test_csv_layout():
    csv = run_sweep(small_spec(observables=("T_a", "conservation_residual")), workers=1).to_csv()
    lines = csv.splitlines()
    assert len(lines) == 5
    assert lines[0] == "delta,theta,T_a,conservation_residual"
    for line in lines[1:]:
        values = [float(v) for v in line.split(",")]
        assert format_float(values[2]) == line.split(",")[2]


def test_round_trip_formatting():
    for v in (0.1, 1 / 3, 1e-300, -2.5e17, 0.0):
        assert float(format_float(v)) == v
    assert format_float(math.nan) == "nan"


def test_resonance_heat_map():
    spec = small_spec(x_axis=Axis("delta", -10, 10, 201), y_axis=Axis("theta", 0, 2 * math.pi, 201))
    result = run_sweep(spec, workers=1)
    t_a = result.column("T_a")
    best = int(np.argmax(t_a))
    assert t_a[best] >= 0.999
    # heat map is degenerate at (0, 0) and (0, 2pi); accept any maximal cell next to either
    x, y = result.rows[best][:2]
    assert abs(x) <= 0.1 + 1e-12
    assert min(abs(y), abs(y - 2 * math.pi)) <= math.pi / 100 + 1e-12
    cell_00 = result.rows[100][2]
    assert cell_00 == pytest.approx(1, abs=1e-9)


def test_delay_period():
    base = resonance_base()
    taus = np.linspace(0, 4 * math.pi, 100, endpoint=False)
    for name in ("T_a", "R_a", "T_b", "R_b"):
        a = [observable(base.with_value("tau", t), name) for t in taus]
        b = [observable(base.with_value("tau", t + 4 * math.pi), name) for t in taus]
        assert np.max(np.abs(np.subtract(a, b))) < 1e-10


def test_theta_columns_periodic():
    obs = ("T_a", "R_a", "T_b", "R_b", "I_a", "I_b")
    base = OperatingPoint(SystemParams.from_chirality(100, 1.2, 1.8, tau=0.7), delta=0.0)
    first = run_sweep(SweepSpec(base, Axis("delta", -3, 3, 7), Axis("theta", 0, 2 * math.pi, 6),
                                obs), workers=1)
    second = run_sweep(SweepSpec(base, Axis("delta", -3, 3, 7),
                                 Axis("theta", 2 * math.pi, 4 * math.pi, 6), obs), workers=1)
    for name in obs:
        assert np.max(np.abs(first.column(name) - second.column(name))) < 1e-10


def test_worker_count_does_not_change_bytes():
    spec = small_spec(x_axis=Axis("G", 0, 4, 9), y_axis=Axis("xi", 0, 3, 7),
                      observables=("T_a", "T_b", "I_a"))
    outputs = {run_sweep(spec, workers=w).to_csv() for w in (1, 4, 8)}
    assert len(outputs) == 1


def test_singular_cells_become_nan(monkeypatch):
    from chiral_router import sweep
    from chiral_router.errors import SingularSystem

    def boom(point, name, port):
        if point.params.xi > 0.5:
            raise SingularSystem("forced")
        return 0.5

    monkeypatch.setattr(sweep, "observable", boom)
    result = run_sweep(small_spec(y_axis=Axis("xi", 0, 1, 2)), workers=1)
    assert [r[2] for r in result.rows[:2]] == [0.5, 0.5]
    assert all(math.isnan(r[2]) for r in result.rows[2:])
    assert len(result.diagnostics) == 2
    assert "nan" in result.to_csv()


@pytest.mark.parametrize("change", [
    dict(x_axis=Axis("nope", 0, 1, 3)),
    dict(x_axis=Axis("G", 1, 1, 3)),
    dict(x_axis=Axis("G", -1, 1, 3)),
    dict(x_axis=Axis("G", 0, 1, 1)),
    dict(x_axis=Axis("theta", 0, 1, 3)),
    dict(x_axis=Axis("epsilon", 99, 101, 3), y_axis=Axis("delta", -1, 1, 3)),
    dict(observables=()),
    dict(observables=("T_c",)),
])
def test_invalid_specs(change):
    with pytest.raises(InvalidSpec):
        run_sweep(small_spec(**change), workers=1)
