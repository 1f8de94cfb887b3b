"""
Corpus-level axiom satisfaction over Preflib SOC files
CC is judged on the irresolute co-winner set, participation on the resolute
rule with a fixed tie-break over each file's alternatives
"""
import concurrent.futures
import logging
import os
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from core.axioms import CC, CC_STAR, PAR, AxiomVerdict, evaluate
from core.errors import BoundExceededError, ValidationError
from core.rules import CONDORCET_CONSISTENT, MRSE, RANKED_PAIRS, RuleSpec, TieBreakOrder, parse_rule
from utils.config import Config
from utils.data_manager import DataManager
from utils.preflib import PreflibRecord, list_soc_files, read_soc

logger = logging.getLogger(__name__)

# rules of the corpus table, in column order
TABLE_RULES = ('plurality', 'borda', 'veto', 'stv', 'black', 'maximin', 'copeland:1/2', 'rankedpairs', 'schulze')
TABLE_AXIOMS = (CC, PAR)
TIEBREAKS = ('lexicographic', 'reverse')


def file_tiebreak(kind: str, m: int) -> TieBreakOrder:
    if kind == 'lexicographic':
        return TieBreakOrder.identity(m)
    if kind == 'reverse':
        return TieBreakOrder(tuple(range(m, 0, -1)))
    raise ValidationError(f"unknown corpus tie-break {kind!r}; expected one of {', '.join(TIEBREAKS)}")


def judge(record: PreflibRecord, rule: RuleSpec, axiom: str, tiebreak: TieBreakOrder) -> Tuple[AxiomVerdict, str]:
    profile = record.profile
    if axiom in (CC, CC_STAR) and rule.kind in CONDORCET_CONSISTENT:
        return AxiomVerdict(axiom, rule.label, True), 'majority'
    if axiom in (CC, CC_STAR) and rule.kind in (MRSE, RANKED_PAIRS) and profile.m > Config.PUT_MAX_ALTERNATIVES:
        return evaluate(CC, rule, profile, tiebreak), 'resolute'
    if axiom == PAR:
        return evaluate(PAR, rule, profile, tiebreak), 'resolute'
    return evaluate(axiom, rule, profile), 'irresolute'


def _evaluate_path(args) -> Dict[str, Any]:
    path, rule_names, axioms, tiebreak_kind = args
    started = time.time()
    try:
        record = read_soc(path)
    except (OSError, UnicodeDecodeError, ValidationError) as e:
        return {'source': path, 'status': 'failed', 'error': str(e)}
    tiebreak = file_tiebreak(tiebreak_kind, record.m)
    verdicts = []
    for name in rule_names:
        rule = parse_rule(name, record.m)
        for axiom in axioms:
            try:
                verdict, mode = judge(record, rule, axiom, tiebreak)
            except (ValidationError, BoundExceededError) as e:
                return {'source': path, 'status': 'failed', 'error': f"{name}/{axiom}: {e}"}
            verdicts.append({'rule': name, 'axiom': axiom, 'satisfied': verdict.satisfied,
                             'mode': mode, 'witness': verdict.witness})
    return {**record.summary(), 'status': 'evaluated', 'verdicts': verdicts,
            'duration_seconds': round(time.time() - started, 3)}


class CorpusEvaluator:
    """Evaluates every .soc file of a directory against rules x axioms"""

    def __init__(self, directory: str, rules: Sequence[str] = TABLE_RULES, axioms: Sequence[str] = TABLE_AXIOMS,
                 tiebreak: str = 'lexicographic', jobs: int = 1):
        self.logger = logging.getLogger(__name__)
        self.directory = directory
        self.rules = tuple(rules)
        self.axioms = tuple(a.lower() for a in axioms)
        file_tiebreak(tiebreak, 2)
        self.tiebreak = tiebreak
        self.jobs = max(1, int(jobs or 1))

    def evaluate_all(self) -> Dict[str, List[Dict]]:
        paths = list_soc_files(self.directory)
        if not paths:
            raise ValidationError(f"no .soc files in {self.directory}")
        tasks = [(p, self.rules, self.axioms, self.tiebreak) for p in paths]
        if self.jobs == 1 or len(paths) == 1:
            outcomes = [_evaluate_path(t) for t in tasks]
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=self.jobs) as ex:
                outcomes = list(ex.map(_evaluate_path, tasks))
        results: Dict[str, List[Dict]] = {'evaluated': [], 'failed': []}
        for outcome in outcomes:
            results[outcome['status']].append(outcome)
            if outcome['status'] == 'failed':
                self.logger.warning(f"skipped {outcome['source']}: {outcome['error']}")
            else:
                self.logger.debug(f"{os.path.basename(outcome['source'])}: m={outcome['m']} n={outcome['n']}")
        return results

    @staticmethod
    def verdict_frame(evaluated: Sequence[Dict]) -> pd.DataFrame:
        rows = [{'source': os.path.basename(r['source']), 'm': r['m'], 'n': r['n'], **{
            k: v[k] for k in ('rule', 'axiom', 'satisfied', 'mode')}} for r in evaluated for v in r['verdicts']]
        return pd.DataFrame(rows, columns=['source', 'm', 'n', 'rule', 'axiom', 'satisfied', 'mode'])

    def table(self, evaluated: Sequence[Dict]) -> pd.DataFrame:
        """Long table: one row per (axiom, rule) with counts and a one-decimal percentage"""
        frame = self.verdict_frame(evaluated)
        if frame.empty:
            return pd.DataFrame(columns=['axiom', 'rule', 'total', 'satisfied', 'percentage'])
        grouped = frame.groupby(['axiom', 'rule'], sort=False)['satisfied'].agg(['size', 'sum']).reset_index()
        grouped.columns = ['axiom', 'rule', 'total', 'satisfied']
        grouped['satisfied'] = grouped['satisfied'].astype(int)
        grouped['percentage'] = (100 * grouped['satisfied'] / grouped['total']).round(1)
        order = {name: i for i, name in enumerate(self.rules)}
        axis = {name: i for i, name in enumerate(self.axioms)}
        grouped = grouped.sort_values(by=['axiom', 'rule'], key=lambda col: col.map(
            axis if col.name == 'axiom' else order)).reset_index(drop=True)
        return grouped

    def pivot(self, table: pd.DataFrame) -> pd.DataFrame:
        if table.empty:
            return pd.DataFrame()
        wide = table.pivot(index='axiom', columns='rule', values='percentage')
        return wide.reindex(index=list(self.axioms), columns=list(self.rules))

    @staticmethod
    def stats(evaluated: Sequence[Dict]) -> Dict[str, Any]:
        if not evaluated:
            return {'files': 0}
        frame = pd.DataFrame([{'m': r['m'], 'n': r['n']} for r in evaluated])
        return {
            'files': len(frame),
            'm_counts': {int(k): int(v) for k, v in frame['m'].value_counts().sort_index().items()},
            'n_min': int(frame['n'].min()),
            'n_median': float(frame['n'].median()),
            'n_max': int(frame['n'].max()),
        }


def evaluate_corpus(directory: str, rules: Sequence[str] = TABLE_RULES, axioms: Sequence[str] = TABLE_AXIOMS,
                    tiebreak: str = 'lexicographic', jobs: int = 1,
                    data_manager: Optional[DataManager] = None, prefix: str = 'corpus') -> Dict[str, Any]:
    """Per-rule satisfaction percentages plus per-file verdicts.

    With a data manager, writes `<prefix>_table.csv` and the audit
    `<prefix>_verdicts.jsonl`.
    """
    started = time.time()
    evaluator = CorpusEvaluator(directory, rules, axioms, tiebreak, jobs)
    results = evaluator.evaluate_all()
    table = evaluator.table(results['evaluated'])
    summary = {
        'directory': directory,
        'total': len(results['evaluated']) + len(results['failed']),
        'evaluated': len(results['evaluated']),
        'failed': [{'source': r['source'], 'error': r['error']} for r in results['failed']],
        'table': table.to_dict(orient='records'),
        'stats': evaluator.stats(results['evaluated']),
        'files': results['evaluated'],
        'duration_seconds': round(time.time() - started, 3),
    }
    # 保存结果
    if data_manager is not None:
        summary['table_path'] = data_manager.save_table(f"{prefix}_table.csv", table)
        summary['pivot_path'] = data_manager.save_table(f"{prefix}_pivot.csv", evaluator.pivot(table).reset_index())
        summary['audit_path'] = data_manager.write_jsonl(f"{prefix}_verdicts.jsonl", results['evaluated'])
    logger.info(f"corpus {directory}: {summary['evaluated']} files evaluated, "
                f"{len(summary['failed'])} skipped in {summary['duration_seconds']}s")
    return summary
