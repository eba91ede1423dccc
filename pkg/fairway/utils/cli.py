from typing import List, Sequence


def strtobool(val):
    """Convert a string representation of truth to true (1) or false (0).

    True values are 'y', 'yes', 't', 'true', 'on', and '1'; false values
    are 'n', 'no', 'f', 'false', 'off', and '0'.  Raises ValueError if
    'val' is anything else.
    """
    val = val.lower()
    if val in ('y', 'yes', 't', 'true', 'on', '1'):
        return 1
    elif val in ('n', 'no', 'f', 'false', 'off', '0'):
        return 0
    else:
        raise ValueError("invalid truth value %r" % (val,))


def parse_float_list(val: str, expected_len: int = 0) -> List[float]:
    """Parse "1,1,2.5,2" style option values."""
    values = [float(v) for v in val.replace(' ', '').split(',') if v]
    if expected_len and len(values) != expected_len:
        raise ValueError(f'expected {expected_len} comma separated numbers, got {len(values)}')
    return values


def format_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Left-aligned plain text table for terminal output."""
    cells = [[str(h) for h in header]] + [[_fmt(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ['  '.join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, '  '.join('-' * w for w in widths))
    return '\n'.join(lines)


def _fmt(v) -> str:
    if v is None:
        return '-'
    if isinstance(v, float):
        return f'{v:.4f}'
    return str(v)
