import json
import os

import pytest

from core.constructions import ODD, par_violation_threshold
from core.profile import parse_profile_text
from core.rules import maximin
from scripts.cli import EXIT_BOUND, EXIT_OK, EXIT_SKIPPED, EXIT_VALIDATION, main
from utils.config import Config
from utils.data_manager import DataManager

SPLIT_TEXT = "# plurality misses the Condorcet winner\n6: 1>2>3\n4: 2>3>1\n4: 3>2>1\n"


@pytest.fixture
def split_file(tmp_path):
    path = tmp_path / 'split.txt'
    path.write_text(SPLIT_TEXT, encoding='utf-8')
    return str(path)


def _load(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def test_evaluate_reports_witness(split_file, tmp_path):
    out = str(tmp_path / 'verdict.json')
    assert main(['evaluate', split_file, '--rule', 'plurality', '--axiom', 'cc', '--out', out]) == EXIT_OK
    result = _load(out)
    assert result['satisfied'] is False
    assert result['witness']['cw'] == 2
    assert result['mode'] == 'irresolute'
    assert result['majority']['cw'] == 2


def test_evaluate_soc_file(corpus_dir, capsys):
    path = os.path.join(corpus_dir, 'ex01_unanimous.soc')
    assert main(['evaluate', path, '--rule', 'borda', '--axiom', 'par', '--tiebreak', 'lexicographic']) == EXIT_OK
    assert '"satisfied": true' in capsys.readouterr().out


def test_evaluate_weighted_profile(tmp_path):
    path = tmp_path / 'weighted.txt'
    path.write_text("3/2: 1>2>3\n1/2: 2>3>1\n1: 3>2>1\n", encoding='utf-8')
    out = str(tmp_path / 'verdict.json')
    assert main(['evaluate', str(path), '--rule', 'plurality', '--axiom', 'cc', '--out', out]) == EXIT_OK
    result = _load(out)
    assert result['n'] is None
    assert result['total'] == '3'


def test_evaluate_validation_errors(tmp_path, split_file):
    assert main(['evaluate', str(tmp_path / 'missing.txt'), '--rule', 'borda']) == EXIT_VALIDATION
    assert main(['evaluate', split_file, '--rule', 'borda:7']) == EXIT_VALIDATION
    assert main(['evaluate', split_file, '--rule', 'borda', '--tiebreak', '2>1']) == EXIT_VALIDATION
    bad = tmp_path / 'bad.txt'
    bad.write_text("2: 1>1>3\n", encoding='utf-8')
    assert main(['evaluate', str(bad), '--rule', 'borda']) == EXIT_VALIDATION


def test_bound_exceeded_exit_code(split_file, monkeypatch):
    monkeypatch.setattr(Config, 'PUT_MAX_ALTERNATIVES', 2)
    assert main(['evaluate', split_file, '--rule', 'stv', '--axiom', 'cc']) == EXIT_BOUND


def test_classify(tmp_path, models_dir):
    out = str(tmp_path / 'classify.json')
    assert main(['classify', '--ic', '3', '--rule', 'plurality', '--out', out]) == EXIT_OK
    assert [c['label'] for c in _load(out)['cases']] == ['Medium', 'Medium']
    model = os.path.join(models_dir, 'cw_plurality_split.json')
    assert main(['classify', '--model', model, '--rule', 'plurality', '--parity', 'odd', '--out', out]) == EXIT_OK
    assert _load(out)['cases'][0]['label'] == 'VeryUnlikely'


def test_classify_condorcet_loser(tmp_path):
    out = str(tmp_path / 'cl.json')
    assert main(['classify', '--ic', '3', '--rule', 'borda', '--axiom', 'cl', '--out', out]) == EXIT_OK
    assert _load(out)['satisfied'] is True
    assert main(['classify', '--ic', '3', '--rule', 'plurality', '--axiom', 'cl', '--out', out]) == EXIT_OK
    result = _load(out)
    assert result['satisfied'] is False
    assert parse_profile_text(result['counterexample']).m == 3
    assert main(['classify', '--ic', '3', '--rule', 'maximin', '--axiom', 'cl']) == EXIT_VALIDATION


def test_model_arguments_are_required():
    assert main(['classify', '--rule', 'plurality']) == EXIT_VALIDATION
    assert main(['classify', '--ic', '3', '--model', 'x.json', '--rule', 'plurality']) == EXIT_VALIDATION
    assert main(['classify', '--model', 'missing.json', '--rule', 'plurality']) == EXIT_VALIDATION


def test_estimate_exact(tmp_path):
    out = str(tmp_path / 'estimate.json')
    assert main(['estimate', '--ic', '3', '--rule', 'maximin', '--axiom', 'cc', '--n', '5', '--exact',
                 '--out', out]) == EXIT_OK
    result = _load(out)
    assert result['exact'] == '1'
    assert result['n'] == 5


def test_estimate_monte_carlo(tmp_path):
    out = str(tmp_path / 'estimate.json')
    assert main(['estimate', '--ic', '4', '--rule', 'borda', '--axiom', 'par', '--n', '11', '21',
                 '--trials', '20', '--jobs', '1', '--out', out]) == EXIT_OK
    rows = _load(out)
    assert [r['n'] for r in rows] == [11, 21]
    assert all(r['estimate'] == 1.0 for r in rows)


def test_sweep_resumes(tmp_path, caplog):
    out = str(tmp_path / 'sweep' / 'curve.csv')
    argv = ['sweep', '--ic', '3', '--rule', 'borda', '--axiom', 'par', '--n', '7', '9',
            '--trials', '10', '--jobs', '1', '--out', out]
    assert main(argv) == EXIT_OK
    assert main(argv) == EXIT_OK
    manager = DataManager(str(tmp_path / 'sweep'))
    table = manager.load_table('curve.csv')
    assert sorted(table['n'].tolist()) == ['7', '9']
    rates = manager.load_json('curve_rates.json')
    assert rates['fit_rate'] == {'borda': None}
    assert 'resuming' in caplog.text


def test_sweep_needs_a_plan(tmp_path):
    assert main(['sweep', '--ic', '3', '--out', str(tmp_path / 's.csv')]) == EXIT_VALIDATION
    assert main(['sweep', '--ic', '3', '--rule', 'borda', '--n', '5', '--trials', '0',
                 '--out', str(tmp_path / 's.csv')]) == EXIT_VALIDATION


def test_corpus_command(corpus_dir, bad_dir, tmp_path, capsys):
    out = str(tmp_path / 'corpus')
    assert main(['corpus', corpus_dir, '--rule', 'plurality', '--jobs', '1', '--out', out,
                 '--format', 'json']) == EXIT_OK
    assert f"{out}: 2 tables" in capsys.readouterr().out
    manager = DataManager(out)
    assert manager.load_json('corpus_summary.json')['evaluated'] == 10
    assert len(manager.load_table('corpus_table.csv')) == 2
    assert main(['corpus', bad_dir, '--jobs', '1', '--out', out]) == EXIT_SKIPPED


def test_construct_writes_fixture(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, 'FIXTURES_DIR', str(tmp_path / 'fixtures'))
    n = par_violation_threshold(maximin(), 4, ODD)
    out = str(tmp_path / 'maximin.txt')
    assert main(['construct', '--rule', 'maximin', '--m', '4', '--n', str(n), '--out', out]) == EXIT_OK
    with open(out, encoding='utf-8') as f:
        profile = parse_profile_text(f.read())
    assert profile.n == n
    manifest = DataManager(str(tmp_path / 'fixtures')).load_table('manifest.csv')
    assert manifest['family'].tolist() == ['maximin']
    assert main(['construct', '--kind', 'gap', '--rule', 'plurality', '--m', '3', '--n', '80',
                 '--out', str(tmp_path / 'gap.txt')]) == EXIT_OK
    assert main(['construct', '--kind', 'gap', '--rule', 'maximin', '--m', '3', '--n', '80']) == EXIT_VALIDATION
    assert main(['construct', '--rule', 'maximin']) == EXIT_VALIDATION
