"""
Download Preflib SOC files listed in a sources CSV (url,file,sha256)
Files whose digest does not match the pinned sha256 are discarded.
With --pin, empty sha256 cells are filled from the downloaded bytes.
"""
import argparse
import hashlib
import logging
import os
import sys
from typing import Dict, List

import pandas as pd
import requests

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from core.errors import ValidationError
from utils.config import Config
from utils.preflib import parse_soc

logger = logging.getLogger('smoothed_axioms.fetch')

SOURCE_COLUMNS = ['url', 'file', 'sha256']


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(8192), b''):
            h.update(chunk)
    return h.hexdigest()


def load_sources(path: str) -> pd.DataFrame:
    if not os.path.exists(path):
        raise ValidationError(f"sources file not found: {path}")
    df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding=Config.CSV_ENCODING)
    missing = [c for c in SOURCE_COLUMNS if c not in df.columns]
    if missing:
        raise ValidationError(f"{path}: missing columns {missing}; expected {SOURCE_COLUMNS}")
    return df


def fetch_one(url: str, session: requests.Session) -> bytes:
    response = session.get(url, timeout=Config.HTTP_TIMEOUT)
    response.raise_for_status()
    return response.content


def fetch_all(sources: pd.DataFrame, target_dir: str, pin: bool = False) -> Dict[str, List]:
    """Returns {'downloaded', 'cached', 'failed'} like the sync summaries"""
    os.makedirs(target_dir, exist_ok=True)
    results: Dict[str, List] = {'downloaded': [], 'cached': [], 'failed': []}
    session = requests.Session()
    session.headers.update({'User-Agent': Config.USER_AGENT})
    for idx, row in sources.iterrows():
        name = row['file'] or os.path.basename(row['url'])
        path = os.path.join(target_dir, name)
        pinned = row['sha256'].strip().lower()
        if os.path.exists(path) and pinned and sha256_file(path) == pinned:
            results['cached'].append(name)
            continue
        try:
            data = fetch_one(row['url'], session)
        except requests.RequestException as e:
            logger.warning(f"{row['url']}: {e}")
            results['failed'].append({'file': name, 'error': str(e)})
            continue
        digest = sha256_bytes(data)
        if pinned and digest != pinned:
            results['failed'].append({'file': name, 'error': f"sha256 {digest} != pinned {pinned}"})
            continue
        try:
            parse_soc(data.decode('utf-8'), source=name)
        except (UnicodeDecodeError, ValidationError) as e:
            results['failed'].append({'file': name, 'error': f"not a usable SOC file: {e}"})
            continue
        with open(path, 'wb') as f:
            f.write(data)
        if pin and not pinned:
            sources.at[idx, 'sha256'] = digest
        results['downloaded'].append(name)
        logger.debug(f"{name}: {len(data)} bytes, sha256 {digest}")
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Fetch a checksum-pinned Preflib SOC corpus")
    parser.add_argument("sources", help="CSV with columns url,file,sha256")
    parser.add_argument("--dir", default=Config.PREFLIB_DIR, help="target directory")
    parser.add_argument("--pin", action="store_true", help="write digests of new downloads back to the sources CSV")
    args = parser.parse_args(argv)
    Config.setup_logging()

    try:
        sources = load_sources(args.sources)
    except ValidationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2

    print(f"🔄 fetching {len(sources)} files into {args.dir} ...")
    results = fetch_all(sources, args.dir, args.pin)
    if args.pin:
        sources.to_csv(args.sources, index=False, encoding=Config.CSV_ENCODING)
        print(f"📌 digests pinned in {args.sources}")

    print(f"✅ downloaded {len(results['downloaded'])}, cached {len(results['cached'])}, "
          f"failed {len(results['failed'])}")
    for failure in results['failed']:
        print(f"⚠️  {failure['file']}: {failure['error']}")
    return 1 if results['failed'] else 0


if __name__ == "__main__":
    sys.exit(main())
