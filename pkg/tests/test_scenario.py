import numpy as np
import pytest

from histq.cli import bundled_scenario_path
from histq.scenario import ScenarioError, load_scenario, parse_scenario


def base_scenario():
    return {
        "dim": 2,
        "hamiltonian": {"real": [[0.0, 0.0], [0.0, 0.0]]},
        "rho": {"matrix": {"real": [[0.75, 0.0], [0.0, 0.25]]}},
        "times": [0.0, 1.0],
        "histories": [
            {"label": "z", "projectors": [
                {"basis": "computational", "index": 0},
                {"identity": True},
            ]},
        ],
        "pvms": [[{"basis": "computational"}]],
        "entropy_p": [1.0, 2.0],
        "seed": 7,
    }


class TestParsing:
    def test_bundled_scenario_parses(self):
        scn = load_scenario(bundled_scenario_path())
        assert scn.dim == 2
        assert scn.grid.times == (0.0, 1.0)
        assert [label for label, _ in scn.histories] == [
            "unit", "plus-then-zero", "zero-zero"]
        assert len(scn.pvms) == 1 and len(scn.pvms[0]) == 2
        assert np.trace(scn.model.rho).real == pytest.approx(1.0)

    def test_matrix_rho(self):
        scn = parse_scenario(base_scenario())
        assert np.allclose(scn.model.rho, np.diag([0.75, 0.25]))

    def test_rank_k_basis_projector(self):
        data = base_scenario()
        data["dim"] = 3
        data["hamiltonian"] = {"real": np.zeros((3, 3)).tolist()}
        data["rho"] = {"matrix": {"real": (np.eye(3) / 3).tolist()}}
        data["histories"] = [{"label": "r2", "projectors": [
            {"basis": "computational", "indices": [0, 2]},
            {"identity": True},
        ]}]
        data["pvms"] = []
        scn = parse_scenario(data)
        _, h = scn.histories[0]
        assert np.allclose(h.operator_at(0.0), np.diag([1.0, 0.0, 1.0]))

    def test_spectral_rho(self):
        data = base_scenario()
        data["rho"] = {"spectral": [
            {"weight": 0.75, "vector": {"real": [1.0, 0.0]}},
            {"weight": 0.25, "vector": {"real": [0.0, 1.0]}},
        ]}
        scn = parse_scenario(data)
        assert np.allclose(scn.model.rho, np.diag([0.75, 0.25]))


class TestValidationErrors:
    def test_bad_trace_names_rho(self):
        data = base_scenario()
        data["rho"] = {"matrix": {"real": [[0.9, 0.0], [0.0, 0.25]]}}
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "rho" in str(err.value)

    def test_non_hermitian_hamiltonian(self):
        data = base_scenario()
        data["hamiltonian"] = {"real": [[0.0, 1.0], [0.0, 0.0]]}
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "hamiltonian" in str(err.value)

    def test_non_projector_matrix_flagged_with_path(self):
        data = base_scenario()
        data["histories"][0]["projectors"][0] = {
            "matrix": {"real": [[0.5, 0.0], [0.0, 0.5]]}}
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "histories[0].projectors[0]" in str(err.value)

    def test_times_must_increase(self):
        data = base_scenario()
        data["times"] = [1.0, 0.0]
        data["histories"] = []
        data["pvms"] = []
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "times" in str(err.value)

    def test_history_length_mismatch(self):
        data = base_scenario()
        data["histories"][0]["projectors"] = [{"identity": True}]
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "projectors" in str(err.value)

    def test_pvm_must_sum_to_identity(self):
        data = base_scenario()
        data["pvms"] = [[{"projectors": [
            {"basis": "computational", "index": 0},
            {"basis": "computational", "index": 0},
        ]}]]
        with pytest.raises(ScenarioError) as err:
            parse_scenario(data)
        assert "pvms[0][0]" in str(err.value)

    def test_entropy_p_range(self):
        data = base_scenario()
        data["entropy_p"] = [0.5]
        with pytest.raises(ScenarioError, match="entropy_p"):
            parse_scenario(data)

    def test_missing_field(self):
        data = base_scenario()
        del data["dim"]
        with pytest.raises(ScenarioError, match="dim"):
            parse_scenario(data)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="unreadable"):
            load_scenario(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ScenarioError, match="invalid JSON"):
            load_scenario(path)
