"""
Result storage
CSV tables through pandas, JSON documents and JSON-lines audits, with
key-based de-duplication so interrupted sweeps resume where they stopped
"""
import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import pandas as pd

from utils.config import Config

logger = logging.getLogger(__name__)


class DataManager:
    """Reads and writes the files of one results directory"""

    def __init__(self, data_dir: str = None):
        self.data_dir = data_dir or Config.RESULTS_DIR
        os.makedirs(self.data_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return name if os.path.isabs(name) or os.path.dirname(name) else os.path.join(self.data_dir, name)

    def load_table(self, name: str) -> pd.DataFrame:
        filename = self.path(name)
        if os.path.exists(filename):
            try:
                return pd.read_csv(filename, dtype=str, keep_default_na=False, encoding=Config.CSV_ENCODING)
            except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
                logger.warning(f"could not read {filename}: {e}")
        return pd.DataFrame()

    def save_table(self, name: str, df: pd.DataFrame) -> str:
        filename = self.path(name)
        os.makedirs(os.path.dirname(filename) or '.', exist_ok=True)
        df.to_csv(filename, index=False, encoding=Config.CSV_ENCODING)
        return filename

    def completed_keys(self, name: str, key_columns: Sequence[str]) -> Set[Tuple[str, ...]]:
        df = self.load_table(name)
        if df.empty or any(c not in df.columns for c in key_columns):
            return set()
        return set(df[list(key_columns)].astype(str).itertuples(index=False, name=None))

    def append_rows(self, name: str, rows: Iterable[Mapping[str, Any]],
                    key_columns: Sequence[str] = ()) -> pd.DataFrame:
        """Append rows; on duplicate keys the newest row wins"""
        new = pd.DataFrame(list(rows))
        if new.empty:
            return self.load_table(name)
        existing = self.load_table(name)
        combined = pd.concat([existing, new.astype(str)], ignore_index=True) if not existing.empty else new
        # 按键去重，保留最新
        if key_columns:
            combined = combined.astype(str).drop_duplicates(subset=list(key_columns), keep='last')
        self.save_table(name, combined)
        return combined

    def save_json(self, name: str, data: Any) -> str:
        filename = self.path(name)
        os.makedirs(os.path.dirname(filename) or '.', exist_ok=True)
        with open(filename, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
        return filename

    def load_json(self, name: str) -> Optional[Any]:
        filename = self.path(name)
        if not os.path.exists(filename):
            return None
        with open(filename, 'r', encoding='utf-8') as f:
            return json.load(f)

    def write_jsonl(self, name: str, records: Iterable[Mapping[str, Any]]) -> str:
        filename = self.path(name)
        os.makedirs(os.path.dirname(filename) or '.', exist_ok=True)
        with open(filename, 'w', encoding='utf-8') as f:
            for record in records:
                f.write(json.dumps(record, ensure_ascii=False) + '\n')
        return filename

    def get_data_summary(self) -> Dict[str, Any]:
        files = sorted(f for f in os.listdir(self.data_dir) if f.endswith('.csv'))
        tables: Dict[str, int] = {}
        unreadable: List[str] = []
        for file in files:
            df = self.load_table(file)
            if df.empty and os.path.getsize(self.path(file)) > 0:
                unreadable.append(file)
            tables[file] = len(df)
        return {
            'data_dir': self.data_dir,
            'total_tables': len(files),
            'total_records': sum(tables.values()),
            'tables': tables,
            'unreadable': unreadable,
            'checked_at': datetime.now().strftime('%Y-%m-%d %H:%M:%S'),
        }
