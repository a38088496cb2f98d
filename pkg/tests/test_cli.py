import json

import numpy as np
import pandas as pd
import pytest

from clustest import Panel, write_panel
from clustest.cli import SEED_ENV, build_parser, main, resolve_seed


@pytest.fixture
def panel_csv(tmp_path):
    y = np.array([[1, 3, 1, 3], [2, 2, 2, 2], [5, 7, 5, 7], [6, 6, 6, 6]], dtype=float)
    path = tmp_path / 'panel.csv'
    write_panel(Panel(y, ('a', 'b', 'c', 'd')), path)
    return str(path)


@pytest.fixture
def tiny_experiment(tmp_path):
    path = tmp_path / 'tiny.json'
    path.write_text(json.dumps({
        'name': 'tiny',
        'cells': [{'dgp': {'n': 12, 't': 6}, 'replications': 4, 'restarts': 2}],
        'sweeps': [{'name': 'Power mu2', 'parameter': 'mu2', 'values': [0.0, 3.0],
                    'base': {'dgp': {'n': 12, 't': 6, 'kind': 'cluster_means', 'means': [0.0, 0.0],
                                     'proportions': [0.5, 0.5]}, 'replications': 4, 'restarts': 2}}]}),
        encoding='utf-8')
    return str(path)


def test_test_command(panel_csv, capsys):
    assert main(['test', panel_csv, '--method', 'f', '--g', '2', '--restarts', '5']) == 0
    out = capsys.readouterr().out
    assert 'p-value' in out
    assert 'statistic:     64.000000' in out
    assert 'WARNING' not in out


def test_test_command_writes_csv(panel_csv, tmp_path):
    out = tmp_path / 'result.csv'
    assert main(['test', panel_csv, '--restarts', '5', '--out', str(out)]) == 0
    frame = pd.read_csv(out)
    assert frame['group'].tolist() == [1, 2]
    assert frame['statistic'].tolist() == pytest.approx([64.0, 64.0])
    assert frame['proportion'].tolist() == pytest.approx([0.5, 0.5])


def test_no_split_prints_warning(panel_csv, capsys):
    assert main(['test', panel_csv, '--method', 'no-split', '--restarts', '5']) == 0
    out = capsys.readouterr().out
    assert out.startswith('=' * 72)
    assert 'WARNING' in out


def test_bonferroni_flag(tmp_path, capsys):
    path = tmp_path / 'noise.csv'
    write_panel(Panel(np.random.default_rng(0).standard_normal((20, 8))), path)
    assert main(['test', str(path), '--bonferroni', '3', '--restarts', '5']) == 0
    out = capsys.readouterr().out
    assert 'components:' in out
    assert 'G=3' in out


def test_group_count_below_two_is_usage_error(panel_csv, capsys):
    with pytest.raises(SystemExit) as e:
        main(['test', panel_csv, '--g', '1'])
    assert e.value.code == 2
    assert 'error[usage]' in capsys.readouterr().err


@pytest.mark.parametrize("extra", [
    ['--method', 'f', '--m-lags', '2'],
    ['--method', 'hac', '--pi-bar', '0.1'],
    ['--method', 't', '--bonferroni', '4'],
])
def test_conflicting_flags(panel_csv, capsys, extra):
    assert main(['test', panel_csv] + extra) == 2
    assert 'error[usage]' in capsys.readouterr().err


def test_singular_variance_exit_code(tmp_path, capsys):
    path = tmp_path / 'flat.csv'
    write_panel(Panel(np.array([[0.0] * 4, [0.0] * 4, [5.0] * 4, [5.0] * 4])), path)
    assert main(['test', str(path), '--restarts', '5']) == 1
    assert 'error[singular_variance]' in capsys.readouterr().err


def test_malformed_csv_exit_code(tmp_path, capsys):
    path = tmp_path / 'bad.csv'
    path.write_text("id,time,value\na,1,1\n", encoding='utf-8')
    assert main(['test', str(path)]) == 1
    assert 'error[malformed_row]' in capsys.readouterr().err


def test_non_utf8_csv_exit_code(tmp_path, capsys):
    path = tmp_path / 'utf16.csv'
    path.write_bytes(b'\xff\xfeu\x00n\x00i\x00t\x00')
    assert main(['test', str(path)]) == 1
    err = capsys.readouterr().err
    assert 'error[malformed_row]' in err
    assert 'Traceback' not in err


def test_missing_file_exit_code(tmp_path, capsys):
    assert main(['test', str(tmp_path / 'missing.csv')]) == 1
    assert 'error[io]' in capsys.readouterr().err


def test_kmeans_command(panel_csv, tmp_path, capsys):
    out = tmp_path / 'fit.csv'
    assert main(['kmeans', panel_csv, '--g', '2', '--restarts', '5', '--out', str(out)]) == 0
    assert 'members:' in capsys.readouterr().out
    frame = pd.read_csv(out)
    assert frame['unit'].tolist() == ['a', 'b', 'c', 'd']
    groups = frame['group'].tolist()
    assert groups[0] == groups[1] != groups[2] == groups[3]
    assert set(groups) == {1, 2}


def test_kmeans_on_testing_sample(panel_csv, capsys):
    assert main(['kmeans', panel_csv, '--g', '2', '--sample', 'p', '--restarts', '5']) == 0
    assert 'groups:      2' in capsys.readouterr().out


def test_simulate_is_reproducible(tiny_experiment, tmp_path, capsys):
    first, second = tmp_path / 'first', tmp_path / 'second'
    assert main(['simulate', tiny_experiment, '--out', str(first), '--seed', '11']) == 0
    assert main(['simulate', tiny_experiment, '--out', str(second), '--seed', '11']) == 0
    assert '3 cells written' in capsys.readouterr().out
    assert (first / 'cells.csv').read_bytes() == (second / 'cells.csv').read_bytes()
    assert (first / 'curve_power_mu2.csv').read_bytes() == (second / 'curve_power_mu2.csv').read_bytes()
    assert 'seconds' not in pd.read_csv(first / 'cells.csv').columns


def test_simulate_writes_svg(tiny_experiment, tmp_path):
    out = tmp_path / 'out'
    assert main(['simulate', tiny_experiment, '--out', str(out), '--svg']) == 0
    assert (out / 'tiny.svg').is_file()


def test_simulate_invalid_config(tmp_path, capsys):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'cells': [{'dgp': {'n': 1, 't': 4}}]}), encoding='utf-8')
    assert main(['simulate', str(path), '--out', str(tmp_path / 'out')]) == 2
    err = capsys.readouterr().err
    assert 'error[invalid_config]' in err
    assert 'dgp.n' in err


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENV, '42')
    assert resolve_seed(None) == 42
    assert resolve_seed(3) == 3
    monkeypatch.delenv(SEED_ENV)
    assert resolve_seed(None) is None


def test_bad_environment_seed(panel_csv, monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV, 'abc')
    assert main(['test', panel_csv]) == 2
    assert SEED_ENV in capsys.readouterr().err


def test_parser_requires_command():
    with pytest.raises(SystemExit) as e:
        build_parser().parse_args([])
    assert e.value.code == 2
