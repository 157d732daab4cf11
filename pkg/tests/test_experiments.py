import json
import math

import numpy as np
import pytest

from exchtest import experiments as ex
from exchtest.errors import ConfigError
from exchtest.evalues import umm_summary_mass
from exchtest.markov_sim import GeneratorSpec, MarkovParams


def _class_entropy_log10(n):
    """E[log10 UMM - log10 ELB] under the mixture: the entropy of the N1 law."""
    logs = np.array([umm_summary_mass(n - k, k).log for k in range(n + 1)])
    p = np.exp(logs)
    return float(-(p * logs).sum() / math.log(10)), p, logs


@pytest.mark.parametrize("n, expected", [(20, 1.28806), (1000, 2.965933), (10**4, 3.965542)])
def test_expected_diff_frozen(n, expected):
    assert _class_entropy_log10(n)[0] == pytest.approx(expected, abs=1e-5)


def test_expected_diff_below_log10_n():
    for n in (20, 1000, 10**4, 10**5):
        assert _class_entropy_log10(n)[0] < math.log10(n)


def test_asymptotic():
    assert ex.asymptotic_log10(10**4) == pytest.approx(360.2, abs=0.05)
    assert ex.asymptotic_log10(10**5) == pytest.approx(3602, abs=0.5)
    assert ex.asymptotic_log10(0) == 0


def test_mixture_diff_matches_entropy():
    n, k = 200, 3000
    res = ex.run(ex.ExperimentSpec(GeneratorSpec("umm", n, 3), k, ("elb", "umm")))
    mean, p, logs = _class_entropy_log10(n)
    sd = math.sqrt(float((p * (logs / math.log(10)) ** 2).sum()) - mean**2)
    assert abs(res.summary.diff_mean - mean) <= 4 * sd / math.sqrt(k)


def test_markov_run_small():
    spec = ex.ExperimentSpec(GeneratorSpec("markov", 20, 1, MarkovParams(0.1, 0.1)), 5000)
    res = ex.run(spec)
    s = res.summary
    assert s.statistics["elb"].mean == pytest.approx(-0.116, abs=0.05)
    assert s.statistics["umm"].mean == pytest.approx(1.226, abs=0.05)
    assert s.n_degenerate > 0
    assert s.tight_bound_exceeded > 0
    assert np.all(res.records["log10_umm"] >= res.records["log10_elb"] - 1e-9)


def test_ub_needs_stationary_under_mixture():
    with pytest.raises(ConfigError):
        ex.ExperimentSpec(GeneratorSpec("umm", 10), 5, ("ub",))
    spec = ex.ExperimentSpec(GeneratorSpec("umm", 10), 5, ("ub",), ub_stationary=(0.5, 0.5))
    assert spec.resolve_ub_stationary() == (0.5, 0.5)


def test_ub_reducible_chain():
    with pytest.raises(ConfigError):
        ex.ExperimentSpec(GeneratorSpec("markov", 10, params=MarkovParams(0, 0)), 5)


def test_bad_config():
    with pytest.raises(ConfigError):
        ex.ExperimentSpec(GeneratorSpec("umm", 10), 0, ("elb",))
    with pytest.raises(ConfigError):
        ex.ExperimentSpec(GeneratorSpec("umm", 10), 5, ("foo",))


def test_csv_identical_across_chunking_and_workers(tmp_path):
    spec = ex.ExperimentSpec(GeneratorSpec("umm", 50, 7), 300, ub_stationary=(0.5, 0.5))
    paths = []
    for i, (workers, chunk) in enumerate([(1, None), (1, 17), (3, 40)]):
        p = tmp_path / f"run{i}.csv"
        ex.write_csv(p, ex.run(spec, workers=workers, chunk_size=chunk).records)
        paths.append(p.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_csv_layout(tmp_path):
    spec = ex.ExperimentSpec(GeneratorSpec("iid", 10, 1, p=0.5), 4, ("elb", "umm"))
    res = ex.run(spec)
    p = tmp_path / "o.csv"
    ex.write_csv(p, res.records)
    lines = p.read_text().splitlines()
    assert lines[0] == ",".join(ex.CSV_COLUMNS)
    assert len(lines) == 5
    fields = lines[1].split(",")
    assert fields[0] == "0" and fields[3] == "" and fields[4] == ""
    assert float(fields[5]) == res.records["log10_umm"][0]


def test_json(tmp_path):
    spec = ex.ExperimentSpec(GeneratorSpec("markov", 30, 9, MarkovParams(0.4, 0.4)), 50)
    res = ex.run(spec)
    p = tmp_path / "o.json"
    ex.write_json(p, res)
    doc = json.loads(p.read_text())
    assert doc["metadata"]["seed"] == 9
    assert "PCG64" in doc["metadata"]["generator_algorithm"]
    assert doc["spec"]["ub_stationary"] == [0.5, 0.5]
    assert doc["summary"]["K"] == 50
    assert "formatted" not in doc
    assert "mean UMM" in ex.format_rows(res.summary, spec)
