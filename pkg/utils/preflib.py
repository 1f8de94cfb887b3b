"""
Preflib strict-order-complete (SOC) election files

Reads the legacy layout (alternative count, id/name lines, an
`n,sum,unique` counts line, then `count,a,b,...` rows) and the current layout
(`# KEY: value` metadata, then `count: a,b,...` rows). Alternative ids are
renumbered 1..m in declaration order.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.errors import ValidationError
from core.profile import Profile

logger = logging.getLogger(__name__)

_META_RE = re.compile(r'^#\s*([A-Z][A-Z0-9 ]*?)\s*:\s*(.*)$')
_ALT_NAME_RE = re.compile(r'^ALTERNATIVE NAME (\d+)$')
_CURRENT_ROW_RE = re.compile(r'^(\d+)\s*:\s*(.+)$')
_TIE_RE = re.compile(r'[{}]')


@dataclass
class PreflibRecord:
    """One parsed election; `names[i]` is the name of alternative i+1"""
    source: str
    profile: Profile
    names: Tuple[str, ...]
    metadata: Dict[str, str] = field(default_factory=dict)
    original_ids: Tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def title(self) -> str:
        return self.metadata.get('TITLE', os.path.basename(self.source))

    def summary(self) -> Dict:
        return {'source': self.source, 'title': self.title, 'm': self.m, 'n': self.n,
                'unique_orders': self.profile.support_size}


def _parse_order(text: str, lineno: int) -> List[int]:
    if _TIE_RE.search(text):
        raise ValidationError(f"line {lineno}: ties are not allowed in SOC data: {text.strip()!r}")
    try:
        return [int(tok) for tok in text.split(',') if tok.strip()]
    except ValueError:
        raise ValidationError(f"line {lineno}: bad ranking {text.strip()!r}")


class _Builder:

    def __init__(self, declared: Sequence[int]):
        self.declared = list(declared)
        self.index: Dict[int, int] = {}
        self.votes: List[Tuple[int, Tuple[int, ...]]] = []
        if self.declared:
            self._fix_ids(self.declared)

    def _fix_ids(self, ids: Sequence[int]):
        self.index = {a: i + 1 for i, a in enumerate(ids)}

    def add(self, count: int, order: List[int], lineno: int):
        if not self.index:
            self._fix_ids(sorted(order))
        if len(order) != len(self.index) or set(order) != set(self.index):
            raise ValidationError(f"line {lineno}: incomplete or unknown ranking {order}; "
                                  f"expected each of {sorted(self.index)} exactly once")
        self.votes.append((count, tuple(self.index[a] for a in order)))

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self.index, key=self.index.get))

    def profile(self) -> Profile:
        if not self.votes:
            raise ValidationError("file contains no rankings")
        return Profile.from_votes(len(self.index), self.votes)


def _parse_current(lines: List[str]) -> Tuple[Dict[str, str], Dict[int, str], _Builder]:
    metadata: Dict[str, str] = {}
    names: Dict[int, str] = {}
    builder: Optional[_Builder] = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            match = _META_RE.match(line)
            if match:
                key, value = match.group(1).strip(), match.group(2).strip()
                alt = _ALT_NAME_RE.match(key)
                if alt:
                    names[int(alt.group(1))] = value
                else:
                    metadata[key] = value
            continue
        if builder is None:
            builder = _Builder(list(names))
        match = _CURRENT_ROW_RE.match(line)
        if not match:
            raise ValidationError(f"line {lineno}: expected '<count>: a,b,...', got {line!r}")
        builder.add(int(match.group(1)), _parse_order(match.group(2), lineno), lineno)
    return metadata, names, builder or _Builder(list(names))


def _parse_legacy(lines: List[str]) -> Tuple[Dict[str, str], Dict[int, str], _Builder]:
    rows = [(lineno, raw.strip()) for lineno, raw in enumerate(lines, start=1) if raw.strip()]
    try:
        m = int(rows[0][1])
    except (IndexError, ValueError):
        raise ValidationError("legacy SOC file must start with the number of alternatives")
    names: Dict[int, str] = {}
    for lineno, line in rows[1:m + 1]:
        ident, _, name = line.partition(',')
        try:
            names[int(ident)] = name.strip()
        except ValueError:
            raise ValidationError(f"line {lineno}: expected '<id>,<name>', got {line!r}")
    if len(rows) < m + 2:
        raise ValidationError("legacy SOC file is missing the voter counts line")
    lineno, counts = rows[m + 1]
    try:
        voters, total, unique = (int(x) for x in counts.split(','))
    except ValueError:
        raise ValidationError(f"line {lineno}: expected 'voters,sum,unique', got {counts!r}")
    builder = _Builder(list(names))
    for lineno, line in rows[m + 2:]:
        count, _, rest = line.partition(',')
        try:
            count = int(count)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad vote count in {line!r}")
        builder.add(count, _parse_order(rest, lineno), lineno)
    metadata = {'NUMBER VOTERS': str(voters), 'NUMBER UNIQUE ORDERS': str(unique),
                'NUMBER ALTERNATIVES': str(m), 'VOTE SUM': str(total)}
    return metadata, names, builder


def _is_legacy(lines: List[str]) -> bool:
    first = next((line.strip() for line in lines if line.strip()), '')
    return first.isdigit()


def parse_soc(content: str, source: str = '<string>') -> PreflibRecord:
    lines = content.splitlines()
    metadata, names, builder = (_parse_legacy if _is_legacy(lines) else _parse_current)(lines)
    profile = builder.profile()
    declared_voters = metadata.get('NUMBER VOTERS')
    if declared_voters is not None and int(declared_voters) != profile.n:
        raise ValidationError(f"{source}: declares {declared_voters} voters but rows sum to {profile.n}")
    declared_m = metadata.get('NUMBER ALTERNATIVES')
    if declared_m is not None and int(declared_m) != profile.m:
        raise ValidationError(f"{source}: declares {declared_m} alternatives, rankings have {profile.m}")
    if 'VOTE SUM' in metadata and int(metadata['VOTE SUM']) != profile.n:
        raise ValidationError(f"{source}: vote sum {metadata['VOTE SUM']} does not match rows ({profile.n})")
    ids = builder.ids
    record = PreflibRecord(
        source=source,
        profile=profile,
        names=tuple(names.get(a, str(a)) for a in ids),
        metadata=metadata,
        original_ids=ids,
    )
    logger.debug(f"parsed {source}: m={record.m} n={record.n}")
    return record


def read_soc(path: str) -> PreflibRecord:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_soc(f.read(), source=path)


def serialize_soc(record: PreflibRecord) -> str:
    """Current-format SOC text; rows by decreasing count then ranking index"""
    profile = record.profile
    rows = sorted(profile.items(), key=lambda item: -item[1])
    lines = [f"# FILE NAME: {os.path.basename(record.source)}"]
    for key, value in record.metadata.items():
        if key not in ('FILE NAME', 'DATA TYPE', 'NUMBER ALTERNATIVES', 'NUMBER VOTERS',
                       'NUMBER UNIQUE ORDERS', 'VOTE SUM'):
            lines.append(f"# {key}: {value}")
    lines += [
        "# DATA TYPE: soc",
        f"# NUMBER ALTERNATIVES: {profile.m}",
        f"# NUMBER VOTERS: {profile.n}",
        f"# NUMBER UNIQUE ORDERS: {profile.support_size}",
    ]
    lines += [f"# ALTERNATIVE NAME {i}: {name}" for i, name in enumerate(record.names, start=1)]
    lines += [f"{count}: {','.join(map(str, order))}" for order, count in rows]
    return '\n'.join(lines) + '\n'


def list_soc_files(directory: str) -> List[str]:
    if not os.path.isdir(directory):
        raise ValidationError(f"corpus directory not found: {directory}")
    return sorted(os.path.join(directory, f) for f in os.listdir(directory) if f.lower().endswith('.soc'))
