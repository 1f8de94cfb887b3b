"""
smoothed-axioms command line
evaluate / classify / estimate / sweep / corpus / construct
"""
import argparse
import json
import logging
import os
import re
import sys
import time
from typing import Any, Dict, Optional, Sequence

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from core.axioms import AXIOMS, CC, CC_STAR, CL, PAR, evaluate, rule_satisfies_cl
from core.classifier import BOTH, PARITIES, classify_cc, classify_par
from core.constructions import cw_scoring_gap_profile, par_violation_profile
from core.corpus import TABLE_AXIOMS, TABLE_RULES, TIEBREAKS, evaluate_corpus
from core.errors import BoundExceededError, ValidationError
from core.model import PreferenceModel, ic_model, load_model
from core.profile import Profile, format_profile_text, majority_structure, parse_profile_text, rational_str
from core.rules import SCORING, RuleSpec, TieBreakOrder, cowinners, parse_rule, resolve
from core.sampling import (SamplerPlan, adversarial_estimate, estimate_satisfaction,
                           exact_smoothed_satisfaction, fit_rate)
from utils.config import Config
from utils.data_manager import DataManager
from utils.preflib import read_soc

logger = logging.getLogger('smoothed_axioms.cli')

EXIT_OK = 0
EXIT_SKIPPED = 1
EXIT_VALIDATION = 2
EXIT_BOUND = 3

SMALL_NS = (40, 100, 200, 400, 800)
LARGE_NS = (1000, 2000, 5000, 10000)
CC_SWEEP_RULES = ('plurality', 'borda', 'veto', 'stv')
PAR_SWEEP_RULES = ('stv', 'maximin', 'rankedpairs', 'schulze', 'black', 'copeland:1/2')

# preset -> (rules, axiom, n values); all under IC with m=4
SWEEP_PRESETS = {
    'ic-cc-small': (CC_SWEEP_RULES, CC, SMALL_NS),
    'ic-cc-large': (CC_SWEEP_RULES, CC, LARGE_NS),
    'ic-par-small': (PAR_SWEEP_RULES, PAR, SMALL_NS),
    'ic-par-large': (PAR_SWEEP_RULES, PAR, LARGE_NS),
}
SWEEP_KEYS = ['model', 'rule', 'axiom', 'n', 'trials', 'seed']


# ---------- shared helpers ----------

def load_profile(path: str) -> Profile:
    if not os.path.exists(path):
        raise ValidationError(f"profile file not found: {path}")
    if path.lower().endswith('.soc'):
        return read_soc(path).profile
    with open(path, 'r', encoding='utf-8') as f:
        return parse_profile_text(f.read())


def load_preference_model(args) -> PreferenceModel:
    if args.model and args.ic:
        raise ValidationError("give either --model or --ic, not both")
    if args.model:
        if not os.path.exists(args.model):
            raise ValidationError(f"model file not found: {args.model}")
        return load_model(args.model)
    if args.ic:
        return ic_model(args.ic)
    raise ValidationError("a preference model is required: --model FILE or --ic M")


def model_label(args) -> str:
    return os.path.basename(args.model) if args.model else f"IC(m={args.ic})"


def parse_tiebreak(text: Optional[str], m: int) -> Optional[TieBreakOrder]:
    if not text:
        return None
    order = TieBreakOrder.identity(m) if text == 'lexicographic' else TieBreakOrder.parse(text)
    if len(order.priority) != m:
        raise ValidationError(f"tie-break {text!r} ranks {len(order.priority)} alternatives, profile has {m}")
    return order


def emit(data: Any, out: Optional[str] = None):
    """JSON to stdout, or to --out"""
    text = json.dumps(data, ensure_ascii=False, indent=2)
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        print(f"💾 written to {out}")
    else:
        print(text)


# ---------- commands ----------

def report_results_dir(manager: DataManager):
    info = manager.get_data_summary()
    print(f"🗂️  {info['data_dir']}: {info['total_tables']} tables, {info['total_records']} rows")
    for name in info['unreadable']:
        logger.warning(f"unreadable table {name}")
    return info


def cmd_evaluate(args) -> int:
    profile = load_profile(args.profile)
    rule = parse_rule(args.rule, profile.m)
    rule.check_m(profile.m)
    tiebreak = parse_tiebreak(args.tiebreak, profile.m)
    verdict = evaluate(args.axiom, rule, profile, tiebreak)
    result = {
        'profile': args.profile, 'm': profile.m, 'n': profile.n if profile.is_integral else None,
        'total': rational_str(profile.total),
        **verdict.to_dict(),
        'mode': 'resolute' if tiebreak is not None or args.axiom == PAR else 'irresolute',
        'majority': majority_structure(profile).to_dict(),
    }
    print(f"{'✅' if verdict.satisfied else '❌'} {rule.label} {args.axiom}: satisfied={str(verdict.satisfied).lower()}")
    emit(result, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    model = load_preference_model(args)
    rule = parse_rule(args.rule, model.m)
    axiom = args.axiom.lower()
    if axiom in (CC, CC_STAR):
        cases = classify_cc(model, rule, args.parity)
        result = {'rule': rule.label, 'axiom': axiom, 'model': model_label(args),
                  'cases': [c.to_dict() for c in cases]}
        for case in cases:
            print(f"📊 {rule.label} {axiom} ({case.parity}): {case.label}")
    elif axiom == PAR:
        case = classify_par(model, rule)
        result = {'rule': rule.label, 'axiom': axiom, 'model': model_label(args), 'cases': [case.to_dict()]}
        print(f"📊 {rule.label} par: {case.label}")
    elif axiom == CL:
        if rule.kind != SCORING:
            raise ValidationError(f"Condorcet loser decision covers scoring rules, not {rule.label}")
        decision = rule_satisfies_cl(rule.scores)
        result = {'rule': rule.label, 'axiom': axiom, 'satisfied': decision.satisfied,
                  'counterexample': format_profile_text(decision.counterexample)
                  if decision.counterexample is not None else None}
        print(f"📊 {rule.label} cl: {'never elects a Condorcet loser' if decision.satisfied else 'can elect a Condorcet loser'}")
    else:
        raise ValidationError(f"unknown axiom {args.axiom!r}; expected one of {', '.join(AXIOMS)}")
    emit(result, args.out)
    return EXIT_OK


def _estimate_point(model: PreferenceModel, args, rule: RuleSpec, axiom: str, n: int,
                    tiebreak: Optional[TieBreakOrder]) -> Dict[str, Any]:
    """One (rule, axiom, n) estimate; IC samples directly, other models take the adversarial minimum"""
    if args.ic and not args.model:
        plan = SamplerPlan.ic(args.ic, n, args.seed, args.trials)
        return estimate_satisfaction(rule, axiom, plan, tiebreak, args.jobs).to_dict()
    report = adversarial_estimate(model, rule, axiom, n, args.trials, args.seed, tiebreak, args.jobs)
    return {**{k: v for k, v in report['minimum'].items() if k != 'candidate'},
            'candidate': report['minimum']['candidate'], 'caveat': report['caveat']}


def cmd_estimate(args) -> int:
    model = load_preference_model(args)
    rule = parse_rule(args.rule, model.m)
    tiebreak = parse_tiebreak(args.tiebreak, model.m)
    axiom = args.axiom.lower()
    rows = []
    for n in args.n:
        if args.exact:
            value, choice = exact_smoothed_satisfaction(model, rule, axiom, n, tiebreak)
            row = {'exact': str(value), 'estimate': float(value), 'assignment': list(choice)}
        else:
            row = _estimate_point(model, args, rule, axiom, n, tiebreak)
        row = {'model': model_label(args), 'rule': rule.label, 'axiom': axiom, 'n': n,
               'trials': args.trials, 'seed': args.seed, **row}
        rows.append(row)
        print(f"🎲 {rule.label} {axiom} n={n}: {row['estimate']:.4f}")
    emit(rows if len(rows) > 1 else rows[0], args.out)
    return EXIT_OK


def _sweep_plan(args):
    if args.preset:
        rules, axiom, ns = SWEEP_PRESETS[args.preset]
        if not (args.model or args.ic):
            args.ic = 4
        return list(args.rule or rules), (args.axiom or axiom).lower(), list(args.n or ns)
    if not args.rule or not args.n:
        raise ValidationError("sweep needs --preset, or --rule and --n")
    return list(args.rule), (args.axiom or CC).lower(), list(args.n)


def cmd_sweep(args) -> int:
    rules, axiom, ns = _sweep_plan(args)
    model = load_preference_model(args)
    tiebreak = parse_tiebreak(args.tiebreak, model.m)
    if args.trials < 1:
        raise ValidationError(f"trials must be at least 1, got {args.trials}")
    manager = DataManager(os.path.dirname(os.path.abspath(args.out)))
    table = os.path.basename(args.out)
    label = model_label(args)
    # 已完成的点直接跳过
    done = manager.completed_keys(table, SWEEP_KEYS)
    if done:
        logger.warning(f"resuming {args.out}: {len(done)} points already present")
    started = time.time()
    for name in rules:
        rule = parse_rule(name, model.m)
        for n in ns:
            key = tuple(str(v) for v in (label, name, axiom, n, args.trials, args.seed))
            if key in done:
                logger.debug(f"skip {key}")
                continue
            row = _estimate_point(model, args, rule, axiom, n, tiebreak)
            row = {'preset': args.preset or '', 'model': label, 'rule': name, 'axiom': axiom,
                   'm': model.m, 'n': n, 'trials': args.trials, 'seed': args.seed, **row}
            row.pop('caveat', None)
            manager.append_rows(table, [row], SWEEP_KEYS)
            logger.info(f"{name} {axiom} n={n}: {row['estimate']:.4f} [{row['ci_lo']:.4f}, {row['ci_hi']:.4f}]")
    # 拟合衰减速率
    frame = manager.load_table(table)
    rates = {}
    for name in rules:
        part = frame[(frame['rule'] == name) & (frame['axiom'] == axiom) & (frame['model'] == label)
                     & (frame['seed'] == str(args.seed)) & (frame['trials'] == str(args.trials))]
        part = part.assign(n=part['n'].astype(int)).sort_values('n')
        rates[name] = fit_rate(part['n'].tolist(), part['estimate'].astype(float).tolist())
        slope = 'n/a' if rates[name] is None else f"{rates[name]:.3f}"
        print(f"📈 {name} {axiom}: {len(part)} points, log-log slope of 1-p = {slope}")
    summary = {'out': args.out, 'model': label, 'axiom': axiom, 'rules': rules, 'n': ns,
               'trials': args.trials, 'seed': args.seed, 'fit_rate': rates,
               'duration_seconds': round(time.time() - started, 3)}
    stem = os.path.splitext(table)[0]
    manager.save_json(f"{stem}_rates.json", summary)
    if args.format == 'json':
        manager.save_json(f"{stem}.json", frame.to_dict(orient='records'))
    report_results_dir(manager)
    print(f"✅ sweep written to {args.out}")
    return EXIT_OK


def cmd_corpus(args) -> int:
    out_dir = args.out or Config.create_results_dir()
    manager = DataManager(out_dir)
    summary = evaluate_corpus(args.directory, args.rule or TABLE_RULES, args.axiom_list or TABLE_AXIOMS,
                              args.tiebreak or 'lexicographic', args.jobs, manager, args.prefix)
    if args.format == 'json':
        manager.save_json(f"{args.prefix}_summary.json", {k: v for k, v in summary.items() if k != 'files'})
    print(f"📊 {summary['evaluated']}/{summary['total']} files evaluated")
    for row in summary['table']:
        print(f"  {row['axiom']:>4} {row['rule']:<14} {row['percentage']:5.1f}%  ({row['satisfied']}/{row['total']})")
    for failure in summary['failed']:
        print(f"⚠️  skipped {failure['source']}: {failure['error']}")
    report_results_dir(manager)
    print(f"✅ table: {summary['table_path']}")
    return EXIT_SKIPPED if summary['failed'] else EXIT_OK


def cmd_construct(args) -> int:
    if args.m is None or args.n is None:
        raise ValidationError("construct needs --m and --n")
    n = args.n[0]
    rule = parse_rule(args.rule, args.m)
    tiebreak = parse_tiebreak(args.tiebreak, args.m) or TieBreakOrder.identity(args.m)
    if args.kind == 'par':
        profile, ranking = par_violation_profile(rule, args.m, n, tiebreak)
        witness = {'ranking': list(ranking.order), 'before': resolve(rule, profile, tiebreak),
                   'after': resolve(rule, profile.remove(ranking.order), tiebreak)}
    else:
        if rule.kind != SCORING:
            raise ValidationError(f"the Condorcet-vs-scoring construction needs a scoring rule, got {rule.label}")
        profile = cw_scoring_gap_profile(rule.scores, args.m, n, args.a, args.b)
        witness = {'cw': args.a, 'scoring_winner': args.b}
    name = f"{args.kind}_{re.sub(r'[^A-Za-z0-9]+', '-', rule.label).strip('-')}_m{args.m}_n{n}.txt"
    fixtures = DataManager(Config.fixtures_path())
    path = args.out or os.path.join(fixtures.data_dir, 'constructions', name)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    header = [f"{args.kind} construction for {rule.label}", f"m={args.m} n={n}",
              f"witness: {json.dumps(witness)}"]
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_profile_text(profile, header))
    winners = sorted(cowinners(rule, profile)) if args.kind == 'gap' else [resolve(rule, profile, tiebreak)]
    fixtures.append_rows('manifest.csv', [{
        'file': os.path.relpath(path, fixtures.data_dir), 'kind': args.kind, 'family': rule.label,
        'm': args.m, 'n': n, 'winners': ' '.join(map(str, winners)), 'witness': json.dumps(witness),
    }], key_columns=['file'])
    print(f"🧩 {rule.label} m={args.m} n={n}: {profile.support_size} distinct rankings, witness {witness}")
    print(f"✅ fixture: {path}")
    return EXIT_OK


# ---------- argument parsing ----------

def _add_model_args(parser: argparse.ArgumentParser):
    parser.add_argument("--model", type=str, help="preference model JSON file")
    parser.add_argument("--ic", type=int, metavar="M", help="impartial culture over M alternatives")


def _add_run_args(parser: argparse.ArgumentParser):
    parser.add_argument("--trials", type=int, default=Config.DEFAULT_TRIALS, help="Monte Carlo trials per point")
    parser.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="random seed")
    parser.add_argument("--jobs", type=int, default=Config.DEFAULT_JOBS, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Smoothed analysis of voting axioms")
    parser.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING ...")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="check one axiom on one profile file")
    p.add_argument("profile", help="profile text file or .soc file")
    p.add_argument("--rule", required=True)
    p.add_argument("--axiom", default=CC, choices=AXIOMS)
    p.add_argument("--tiebreak", help="'lexicographic' or a priority such as 3>1>2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="asymptotic case of a rule/axiom under a model")
    _add_model_args(p)
    p.add_argument("--rule", required=True)
    p.add_argument("--axiom", default=CC, choices=AXIOMS)
    p.add_argument("--parity", default=BOTH, choices=PARITIES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("estimate", help="satisfaction probability at fixed n")
    _add_model_args(p)
    _add_run_args(p)
    p.add_argument("--rule", required=True)
    p.add_argument("--axiom", default=CC, choices=AXIOMS)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--tiebreak")
    p.add_argument("--exact", action="store_true", help="exact convolution (small n and m only)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="satisfaction curve over n with checkpointing")
    _add_model_args(p)
    _add_run_args(p)
    p.add_argument("--preset", choices=sorted(SWEEP_PRESETS))
    p.add_argument("--rule", action="append")
    p.add_argument("--axiom", choices=AXIOMS)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--tiebreak")
    p.add_argument("--out", default=os.path.join(Config.RESULTS_DIR, "sweep.csv"))
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("corpus", help="CC/Par satisfaction over a directory of .soc files")
    p.add_argument("directory")
    p.add_argument("--rule", action="append")
    p.add_argument("--axiom", dest="axiom_list", action="append", choices=AXIOMS)
    p.add_argument("--tiebreak", choices=TIEBREAKS)
    p.add_argument("--jobs", type=int, default=Config.DEFAULT_JOBS)
    p.add_argument("--prefix", default="corpus")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("construct", help="write a witness profile fixture")
    p.add_argument("--kind", default="par", choices=("par", "gap"))
    p.add_argument("--rule", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int, nargs=1)
    p.add_argument("--a", type=int, default=1, help="Condorcet winner (gap)")
    p.add_argument("--b", type=int, default=2, help="scoring winner (gap)")
    p.add_argument("--tiebreak")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv: Sequence[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    Config.setup_logging(args.log_level)
    try:
        return args.func(args)
    except BoundExceededError as e:
        logger.error(str(e))
        print(f"❌ bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    except ValidationError as e:
        logger.error(str(e))
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
