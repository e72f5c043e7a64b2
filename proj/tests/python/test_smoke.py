import math
import os

import pytest

import hypstab

CONFIGS = os.environ.get("HYPSTAB_CONFIGS", os.path.join(os.path.dirname(__file__), "..", "..", "configs"))


def test_eigendecompose():
    values, vectors = hypstab.eigendecompose([[2.0, 1.0], [1.0, 2.0]])
    assert values == pytest.approx([1.0, 3.0])
    col = [vectors[0][1], vectors[1][1]]
    assert col == pytest.approx([1 / math.sqrt(2), 1 / math.sqrt(2)])


def test_supersonic_potential_and_partition():
    system = hypstab.euler_system(v_bar=(3.0, 0.0), a_bar=1.0)
    search = hypstab.find_potential(system)
    assert search.feasible
    pot = search.potential
    assert pot.m[0] < 0
    assert hypstab.lmi_check(system, pot.m, pot.C_A)
    counts = hypstab.partition_counts(system, hypstab.Grid([8, 8], [1.0, 1.0]))
    assert counts[1] == (8, 24)


def test_subsonic_is_infeasible():
    search = hypstab.find_potential(hypstab.euler_system(v_bar=(0.5, 0.0)))
    assert not search.feasible
    assert search.best_value > 0


def test_oracle_agrees_on_random_system():
    result = hypstab.compare_with_grid_oracle(hypstab.random_system(7))
    assert result["agree"]


def test_run_decays():
    system = hypstab.euler_system()
    pot = hypstab.find_potential(system).potential
    grid = hypstab.Grid([16, 16], [1.0, 1.0])
    rec = hypstab.run(system, grid, hypstab.initial_bump(grid, 3), pot, hypstab.ControlSpec(), 0.3)
    assert len(rec.t) == rec.steps + 1
    assert all(b <= a for a, b in zip(rec.L, rec.L[1:]))
    assert rec.c_fit >= pot.C_L
    assert rec.to_csv().startswith("t,L,boundary_integral,control_1,control_2,control_3\n")


def test_fit_decay_rate():
    t = [0.1 * i for i in range(50)]
    assert hypstab.fit_decay_rate(t, [math.exp(-3 * s) for s in t]) == pytest.approx(3.0)


def test_config_round_trip_and_errors():
    text = hypstab.serialize_config()
    assert hypstab.parse_config(text) == text
    with pytest.raises(hypstab.ConfigError):
        hypstab.parse_config("grid.N9 = 3\n")


def test_library_errors_are_translated():
    with pytest.raises(hypstab._core.Error):
        hypstab.HyperbolicSystem([[[1.0, 2.0], [3.0, 1.0]]])


def test_run_command(tmp_path):
    code, out, _ = hypstab.run_command("check", os.path.join(CONFIGS, "euler_supersonic.cfg"))
    assert code == 0
    assert "result: feasible" in out
    code, _, _ = hypstab.run_command("check", os.path.join(CONFIGS, "euler_subsonic.cfg"))
    assert code == 2
    csv = tmp_path / "run.csv"
    code, out, _ = hypstab.run_command("run", os.path.join(CONFIGS, "advection_1d.cfg"), str(csv))
    assert code == 0
    assert out.startswith("C_L=")
    assert csv.read_text().splitlines()[0] == "t,L,boundary_integral,control_1"
