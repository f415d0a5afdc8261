"""
Dataset loading, validation and serialization (CSV / JSON)
"""

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor

import pandas as pd
import pydantic

from backend.core.models import CasinoQuote, GameRecord, is_known_league
from backend.errors import EmptyDataset, ParseError, ValidationError
from backend.ingest.dataset import Dataset
from config.settings import MAX_QUOTES_PER_GAME

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'game_id', 'league', 'start_time', 'favorite', 'underdog', 'fav_points',
    'und_points', 'casino_id', 'fav_spread', 'fav_ml', 'und_ml', 'updated_at',
]
GAME_FIELDS = ('league', 'start_time', 'favorite', 'underdog', 'fav_points', 'und_points')
QUOTE_FIELDS = ('casino_id', 'fav_spread', 'fav_ml', 'und_ml', 'updated_at')
FORMATS = ('csv', 'json')


def format_timestamp(value) -> str:
    return value.isoformat().replace('+00:00', 'Z')


def _parse_timestamp(raw, field, line):
    try:
        stamp = pd.Timestamp(str(raw).strip())
    except (ValueError, TypeError) as e:
        raise ParseError(f"bad {field} {raw!r}: {e}", line=line)
    if pd.isna(stamp):
        raise ParseError(f"missing {field}", line=line)
    if stamp.tzinfo is None:
        stamp = stamp.tz_localize('UTC')
    return stamp.tz_convert('UTC').to_pydatetime()


def _parse_int(raw, field, line, optional=False):
    text = '' if raw is None else str(raw).strip()
    if not text:
        if optional:
            return None
        raise ParseError(f"missing {field}", line=line)
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{field} must be an integer, got {text!r}", line=line)


def _parse_float(raw, field, line):
    text = '' if raw is None else str(raw).strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{field} must be a decimal, got {text!r}", line=line)
    if not math.isfinite(value):
        raise ParseError(f"{field} must be finite, got {text!r}", line=line)
    return value


def _parse_text(raw, field, line):
    text = '' if raw is None else str(raw).strip()
    if not text:
        raise ParseError(f"missing {field}", line=line)
    return text


def _parse_game_fields(row, line):
    return {
        'league': _parse_text(row.get('league'), 'league', line),
        'start_time': _parse_timestamp(row.get('start_time'), 'start_time', line),
        'favorite': _parse_text(row.get('favorite'), 'favorite', line),
        'underdog': _parse_text(row.get('underdog'), 'underdog', line),
        'fav_points': _parse_int(row.get('fav_points'), 'fav_points', line),
        'und_points': _parse_int(row.get('und_points'), 'und_points', line),
    }


def _build_quote(row, line, game_id):
    fields = {
        'casino_id': _parse_text(row.get('casino_id'), 'casino_id', line),
        'favorite_spread': _parse_float(row.get('fav_spread'), 'fav_spread', line),
        'favorite_ml': _parse_int(row.get('fav_ml'), 'fav_ml', line, optional=True),
        'underdog_ml': _parse_int(row.get('und_ml'), 'und_ml', line, optional=True),
        'updated_at': _parse_timestamp(row.get('updated_at'), 'updated_at', line),
    }
    try:
        return CasinoQuote(**fields)
    except pydantic.ValidationError as e:
        raise ValidationError(_first_error(e), game_id=game_id)


def _first_error(error: pydantic.ValidationError) -> str:
    first = error.errors()[0]
    where = '.'.join(str(p) for p in first.get('loc', ()))
    return f"{where}: {first['msg']}" if where else first['msg']


def _quote_rank(quote):
    """Latest update first; same-time updates fall back to the quote's own prices"""
    prices = (quote.favorite_spread, quote.favorite_ml, quote.underdog_ml)
    return quote.updated_at, tuple((v is not None, v if v is not None else 0) for v in prices)


def last_update_filter(raw_quotes):
    """Keep each casino's latest quote; output ordered by casino_id

    The kept quote does not depend on input order, even for same-time updates.
    """
    latest = {}
    for quote in raw_quotes:
        current = latest.get(quote.casino_id)
        if current is None or _quote_rank(quote) > _quote_rank(current):
            latest[quote.casino_id] = quote
    return [latest[casino] for casino in sorted(latest)]


def _assemble_games(grouped, source):
    """grouped: game_id -> (game fields, [CasinoQuote], first line)"""
    games = []
    for game_id, (fields, raw_quotes, line) in grouped.items():
        quotes = last_update_filter(raw_quotes)
        if not any(q.has_moneyline for q in quotes):
            logger.warning("⚠️ dropping game %s (line %s): no casino priced the moneyline", game_id, line)
            continue
        if len(quotes) > MAX_QUOTES_PER_GAME:
            logger.warning("game %s has %d casino quotes (expected at most %d)",
                           game_id, len(quotes), MAX_QUOTES_PER_GAME)
        try:
            game = GameRecord(
                game_id=game_id,
                league=fields['league'],
                start_time=fields['start_time'],
                favorite_name=fields['favorite'],
                underdog_name=fields['underdog'],
                favorite_points=fields['fav_points'],
                underdog_points=fields['und_points'],
                quotes=tuple(quotes),
            )
        except pydantic.ValidationError as e:
            raise ValidationError(_first_error(e), game_id=game_id)
        if not is_known_league(game.league):
            logger.debug("game %s uses user-defined league %s", game_id, game.league)
        games.append(game)
    if not games:
        raise EmptyDataset(f"{source}: no priced games")
    return Dataset.from_games(games, source_meta=(os.path.abspath(source),))


def _group_rows(rows, source):
    """rows: iterable of (line, game_id, game fields, quote row)"""
    grouped = {}
    for line, game_id, fields, quote_row in rows:
        quote = _build_quote(quote_row, line, game_id)
        if game_id in grouped:
            known, quotes, first_line = grouped[game_id]
            if known != fields:
                raise ValidationError(
                    f"line {line} disagrees with line {first_line} on game fields",
                    game_id=game_id,
                )
            quotes.append(quote)
        else:
            grouped[game_id] = (fields, [quote], line)
    if not grouped:
        raise EmptyDataset(f"{source}: no rows")
    return grouped


def _csv_rows(path):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise EmptyDataset(f"{path}: empty file")
    except pd.errors.ParserError as e:
        raise ParseError(str(e))
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ParseError(f"header is missing columns {missing}", line=1)
    for offset, row in enumerate(frame.to_dict('records')):
        line = offset + 2
        game_id = _parse_text(row.get('game_id'), 'game_id', line)
        yield line, game_id, _parse_game_fields(row, line), row


def _json_rows(path):
    with open(path, encoding='utf-8') as f:
        try:
            records = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, line=e.lineno)
    if not isinstance(records, list):
        raise ParseError("top level must be an array of games", line=1)
    for index, record in enumerate(records, start=1):
        if not isinstance(record, dict):
            raise ParseError(f"record {index} is not an object")
        game_id = _parse_text(record.get('game_id'), 'game_id', index)
        fields = _parse_game_fields(record, index)
        quotes = record.get('quotes') or []
        if not quotes:
            raise ValidationError("no quotes", game_id=game_id)
        for quote in quotes:
            yield index, game_id, fields, quote


def infer_format(path, fmt=None):
    fmt = (fmt or os.path.splitext(str(path))[1].lstrip('.')).lower()
    if fmt not in FORMATS:
        raise ParseError(f"unsupported dataset format {fmt!r} (expected csv or json)")
    return fmt


def load_dataset(path, fmt=None) -> Dataset:
    """Parse, validate and sort one dataset file"""
    fmt = infer_format(path, fmt)
    rows = _csv_rows(path) if fmt == 'csv' else _json_rows(path)
    dataset = _assemble_games(_group_rows(rows, path), path)
    logger.info("Loaded %d games from %s", len(dataset), path)
    return dataset


def merge_datasets(datasets) -> Dataset:
    games = {}
    meta = []
    for dataset in datasets:
        meta.extend(dataset.source_meta)
        for game in dataset.games:
            if game.game_id in games:
                raise ValidationError("appears in more than one input file", game_id=game.game_id)
            games[game.game_id] = game
    return Dataset.from_games(games.values(), source_meta=meta)


def load_datasets(paths, fmt=None, workers=1) -> Dataset:
    """Load several files (optionally in parallel) and merge them in argument order"""
    paths = list(paths)
    if not paths:
        raise EmptyDataset("no dataset paths given")
    if workers > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            datasets = list(pool.map(lambda p: load_dataset(p, fmt), paths))
    else:
        datasets = [load_dataset(p, fmt) for p in paths]
    return datasets[0] if len(datasets) == 1 else merge_datasets(datasets)


def _quote_record(quote):
    return {
        'casino_id': quote.casino_id,
        'fav_spread': quote.favorite_spread,
        'fav_ml': quote.favorite_ml,
        'und_ml': quote.underdog_ml,
        'updated_at': format_timestamp(quote.updated_at),
    }


def _game_record(game):
    return {
        'game_id': game.game_id,
        'league': game.league,
        'start_time': format_timestamp(game.start_time),
        'favorite': game.favorite_name,
        'underdog': game.underdog_name,
        'fav_points': game.favorite_points,
        'und_points': game.underdog_points,
    }


def _cell(value):
    if value is None:
        return ''
    return repr(value) if isinstance(value, float) else str(value)


def save_dataset(dataset: Dataset, path, fmt=None):
    """Write a dataset in the canonical schema; load_dataset reads it back unchanged"""
    fmt = infer_format(path, fmt)
    if fmt == 'json':
        records = [dict(_game_record(g), quotes=[_quote_record(q) for q in g.quotes])
                   for g in dataset.games]
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(records, f, indent=2)
        return path
    rows = []
    for game in dataset.games:
        base = _game_record(game)
        for quote in game.quotes:
            row = dict(base, **_quote_record(quote))
            rows.append({c: _cell(row[c]) for c in CSV_COLUMNS})
    pd.DataFrame(rows, columns=CSV_COLUMNS).to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    return path
