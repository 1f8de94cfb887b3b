import json

import pandas as pd

KEYS = ['rule', 'n']


def test_append_rows_keeps_newest(manager):
    manager.append_rows('sweep.csv', [{'rule': 'borda', 'n': 5, 'estimate': 0.5}], KEYS)
    manager.append_rows('sweep.csv', [{'rule': 'borda', 'n': 5, 'estimate': 0.75},
                                      {'rule': 'veto', 'n': 5, 'estimate': 0.25}], KEYS)
    table = manager.load_table('sweep.csv')
    assert len(table) == 2
    assert table.set_index('rule').loc['borda', 'estimate'] == '0.75'
    assert manager.completed_keys('sweep.csv', KEYS) == {('borda', '5'), ('veto', '5')}


def test_missing_and_broken_tables(manager):
    assert manager.load_table('absent.csv').empty
    assert manager.completed_keys('absent.csv', KEYS) == set()
    manager.save_table('other.csv', pd.DataFrame([{'x': 1}]))
    assert manager.completed_keys('other.csv', KEYS) == set()
    with open(manager.path('empty.csv'), 'w', encoding='utf-8'):
        pass
    assert manager.load_table('empty.csv').empty


def test_json_documents(manager):
    assert manager.load_json('summary.json') is None
    manager.save_json('summary.json', {'rate': None, 'label': 'Medium'})
    assert manager.load_json('summary.json') == {'rate': None, 'label': 'Medium'}
    path = manager.write_jsonl('audit.jsonl', [{'a': 1}, {'a': 2}])
    with open(path, encoding='utf-8') as f:
        assert [json.loads(line)['a'] for line in f] == [1, 2]


def test_paths(manager, tmp_path):
    assert manager.path('t.csv').startswith(manager.data_dir)
    absolute = str(tmp_path / 'elsewhere.csv')
    assert manager.path(absolute) == absolute


def test_summary(manager):
    manager.save_table('a.csv', pd.DataFrame([{'x': 1}, {'x': 2}]))
    manager.save_table('b.csv', pd.DataFrame([{'y': 3}]))
    summary = manager.get_data_summary()
    assert summary['total_tables'] == 2
    assert summary['total_records'] == 3
    assert summary['tables'] == {'a.csv': 2, 'b.csv': 1}
    assert summary['unreadable'] == []
