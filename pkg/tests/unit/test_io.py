"""
Tests for artifact files.
"""

import numpy as np
import pytest

from fsll.core.exceptions import FileFormatError
from fsll.models.boltzmann import BmParams
from fsll.models.dataset import Dataset
from fsll.models.state import SparseTheta
from fsll.schemas.candidate import CandidateKind
from fsll.schemas.fit import FitRecord, FitStatus, FitTrace
from fsll.schemas.generators import IsingGridSpec
from fsll.schemas.report import ModelKind, RunReport
from fsll.schemas.variables import VariableSpec
from fsll.services import generator_service, io_service


def test_dataset_file(tmp_path):
    """Test writing and reading a dataset."""
    spec = VariableSpec(cards=[2, 3, 4])
    data = Dataset(spec, np.array([[0, 2, 3], [1, 0, 0], [1, 1, 2]]))
    path = tmp_path / "data.csv"
    io_service.write_dataset(data, path)
    assert path.read_text().splitlines()[0] == "# cards: 2,3,4"
    loaded = io_service.read_dataset(path)
    assert loaded.spec == spec
    np.testing.assert_array_equal(loaded.rows, data.rows)


def test_dataset_file_errors(tmp_path):
    """Test malformed dataset files."""
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n1,1\n")
    with pytest.raises(FileFormatError):
        io_service.read_dataset(path)
    path.write_text("# cards: 2,2\n0,2\n")
    with pytest.raises(FileFormatError):
        io_service.read_dataset(path)
    path.write_text("# cards: 2,x\n0,1\n")
    with pytest.raises(FileFormatError):
        io_service.read_dataset(path)


def test_model_file_is_exact(tmp_path):
    """Test that parameters survive a write/read cycle bit for bit."""
    spec = VariableSpec(cards=[2, 3])
    theta = SparseTheta({1: 0.1 + 0.2, 5: -1.0 / 3.0})
    path = tmp_path / "model.txt"
    io_service.write_model(theta, path, spec)
    lines = path.read_text().splitlines()
    assert lines[:2] == ["# kind: fsll", "# cards: 2,3"]
    assert lines[2].startswith("1,0,")
    loaded_spec, loaded = io_service.read_model(path)
    assert loaded_spec == spec
    assert loaded == theta


def test_model_file_errors(tmp_path):
    """Test wrong kind and duplicate records."""
    path = tmp_path / "model.txt"
    path.write_text("# kind: bm\n# cards: 2\n1,0.5\n")
    with pytest.raises(FileFormatError):
        io_service.read_model(path)
    path.write_text("# kind: fsll\n# cards: 2\n1,0.5\n1,0.25\n")
    with pytest.raises(FileFormatError):
        io_service.read_model(path)
    path.write_text("# kind: fsll\n# cards: 2\n0,0.5\n")
    with pytest.raises(FileFormatError):
        io_service.read_model(path)


def test_bm_model_file(tmp_path, rng):
    """Test the Boltzmann machine file and kind dispatch."""
    params = BmParams(3, rng.normal(size=(3, 3)), rng.normal(size=3))
    path = tmp_path / "bm.txt"
    io_service.write_bm_model(params, path, "bm-pcd")
    assert io_service.read_header(path)["trainer"] == "bm-pcd"
    loaded = io_service.read_any_model(path)
    np.testing.assert_array_equal(loaded.to_vector(), params.to_vector())
    assert "2,3," in path.read_text()


def test_truth_files(tmp_path):
    """Test truth specs of both families."""
    ising = IsingGridSpec(rows=3, cols=2, coupling=0.5)
    path = tmp_path / "ising.txt"
    io_service.write_truth(ising, path)
    assert io_service.read_truth(path) == ising

    net = generator_service.random_bayes_net(6, "bn3", 2)
    path = tmp_path / "bn.txt"
    io_service.write_truth(net, path)
    assert io_service.read_truth(path) == net

    path.write_text("# family: potts\n")
    with pytest.raises(FileFormatError):
        io_service.read_truth(path)


def test_trace_file(tmp_path):
    """Test the trace CSV layout."""
    trace = FitTrace(
        records=[FitRecord(iter=1, y=3, kind=CandidateKind.APPEND, delta=-0.1, cost=0.5, ms=1.25)],
        status=FitStatus.CONVERGED,
    )
    path = tmp_path / "trace.csv"
    io_service.write_trace(trace, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "iter,y,kind,delta,cost,ms"
    assert lines[1].startswith("1,3,append,")


def test_report_append(tmp_path):
    """Test that report rows accumulate under one header."""
    path = tmp_path / "report.csv"
    first = RunReport(dataset="a", model=ModelKind.FSLL, kl_pd=0.1, kl_pstar=0.2, basis_count=3, wall_ms=5, seed=1)
    second = RunReport(dataset="b", model=ModelKind.BM_DI, kl_pd=0.3, basis_count=10)
    io_service.append_report(first, path)
    io_service.append_report(second, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "dataset,model,kl_pd,kl_pstar,basis_count,wall_ms,seed"
    assert len(lines) == 3
    assert io_service.read_reports(path) == [first, second]
