"""Tests for file I/O: lattice objects and reports."""

import json
from pathlib import Path

import pytest

from toric_diagonal.io import (
    edge_from_json,
    edge_to_json,
    from_json_dict,
    load_object,
    save_object,
    save_report,
    site_from_json,
    site_to_json,
    to_json_dict,
)
from toric_diagonal.lattice import Face, LatticePath, PathKind, Patch, Vertex, h_edge, v_edge
from toric_diagonal.models import CaseResult, Status, VerificationReport
from toric_diagonal.pauli import Phase, PauliOperator


class TestLoadObject:
    """Bundled resource documents."""

    def test_load_patch(self, patch_json: Path, box1: Patch) -> None:
        assert load_object(patch_json) == box1

    def test_load_path(self, path_json: Path) -> None:
        path = load_object(path_json)
        assert isinstance(path, LatticePath)
        assert path.kind is PathKind.DUAL
        assert path.edges == (v_edge(1, 0), v_edge(2, 0), h_edge(2, 1))
        assert path.endpoints == {Face(Vertex(0, 0)), Face(Vertex(2, 1))}

    def test_load_pauli(self, pauli_json: Path) -> None:
        op = load_object(pauli_json)
        assert op == PauliOperator(
            frozenset({h_edge(0, 0)}),
            frozenset({h_edge(0, 0), v_edge(0, 0)}),
            Phase.from_label("-i"),
        )

    def test_load_file_not_found(self, tmp_path: Path) -> None:
        """Loading a non-existent file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_object(tmp_path / "nonexistent.json")

    def test_load_invalid_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValueError, match="Invalid lattice JSON"):
            load_object(path)


class TestSaveObject:
    """Canonical output."""

    def test_save_and_reload(self, resources_dir: Path, tmp_path: Path) -> None:
        for name in ("patch.json", "path.json", "pauli.json"):
            original = load_object(resources_dir / name)
            out = tmp_path / "nested" / name
            save_object(original, out)
            assert load_object(out) == original

    def test_output_is_reproducible(self, box1: Patch, tmp_path: Path) -> None:
        """Saving the same object twice gives identical bytes."""
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_object(box1, a)
        save_object(Patch(frozenset(reversed(box1.sorted_edges))), b)
        assert a.read_bytes() == b.read_bytes()

    def test_path_keeps_step_order(self, path_json: Path) -> None:
        data = to_json_dict(load_object(path_json))
        assert data["edges"] == [[1, 0, "V"], [2, 0, "V"], [2, 1, "H"]]

    def test_unknown_object(self) -> None:
        with pytest.raises(TypeError):
            to_json_dict(Vertex(0, 0))


class TestJsonLayouts:
    """Edges, sites and malformed documents."""

    def test_edge(self) -> None:
        assert edge_to_json(v_edge(-2, 3)) == [-2, 3, "V"]
        assert edge_from_json([-2, 3, "V"]) == v_edge(-2, 3)

    @pytest.mark.parametrize("data", [[0, 0], [0, "0", "H"], "H@0,0", [0, 0, "D"]])
    def test_invalid_edge(self, data: object) -> None:
        with pytest.raises(ValueError, match="Invalid edge"):
            edge_from_json(data)

    def test_sites(self) -> None:
        assert site_to_json(Vertex(1, 2)) == {"vertex": [1, 2]}
        assert site_to_json(Face(Vertex(1, 2))) == {"face": [1, 2]}
        assert site_from_json({"face": [1, 2]}) == Face(Vertex(1, 2))
        with pytest.raises(ValueError, match="Invalid site"):
            site_from_json({"edge": [1, 2]})

    @pytest.mark.parametrize(
        "data, message",
        [
            ([], "expected an object"),
            ({"edges": []}, "expected an object"),
            ({"kind": "ribbon"}, "unknown kind"),
            ({"kind": "path", "path_kind": "diagonal", "edges": []}, "Invalid path kind"),
            ({"kind": "pauli", "phase": "2"}, "Invalid phase"),
        ],
    )
    def test_invalid_documents(self, data: object, message: str) -> None:
        with pytest.raises(ValueError, match=message):
            from_json_dict(data)

    def test_discontinuous_path(self) -> None:
        data = {"kind": "path", "path_kind": "direct",
                "edges": [[0, 0, "H"], [5, 5, "H"]]}
        with pytest.raises(ValueError):
            from_json_dict(data)


class TestSaveReport:
    """Report files."""

    @pytest.fixture
    def report(self) -> VerificationReport:
        return VerificationReport(
            suite="algebra",
            seed=3,
            parameters={"samples": 5},
            cases=[
                CaseResult("algebra.syndrome-parity", "|Z| parity", {"samples": 5},
                           Status.PASS, {"checked": 5}, elapsed=0.25),
            ],
            elapsed=0.5,
        )

    def test_json(self, report: VerificationReport, tmp_path: Path) -> None:
        out = tmp_path / "reports" / "report.json"
        save_report(report, out)
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["suite"] == "algebra"
        assert data["summary"] == {"pass": 1, "fail": 0, "skipped": 0}
        assert "elapsed" not in data

    def test_json_with_timing(self, report: VerificationReport, tmp_path: Path) -> None:
        out = tmp_path / "report.json"
        save_report(report, out, include_timing=True)
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["elapsed"] == 0.5
        assert data["cases"][0]["elapsed"] == 0.25

    def test_markdown(self, report: VerificationReport, tmp_path: Path) -> None:
        out = tmp_path / "report.md"
        save_report(report, out, fmt="markdown")
        text = out.read_text(encoding="utf-8")
        assert text.startswith("# Verification report: algebra")
        assert "`algebra.syndrome-parity`" in text

    def test_unknown_format(self, report: VerificationReport, tmp_path: Path) -> None:
        with pytest.raises(ValueError, match="Unknown report format"):
            save_report(report, tmp_path / "report.csv", fmt="csv")
