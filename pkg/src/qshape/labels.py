"""Text form of object labels: integers, ZA3 pairs ``(x,y)`` and names."""

import re

_PAIR = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def format_label(obj):
    if isinstance(obj, tuple):
        return "(" + ",".join(str(x) for x in obj) + ")"
    return str(obj)


def parse_label(text):
    text = text.strip()
    m = _PAIR.match(text)
    if m:
        return (int(m.group(1)), int(m.group(2)))
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    return text


def jsonable(value):
    """Best-effort conversion of witnesses and labels to JSON-ready data."""
    if isinstance(value, dict):
        return {format_label(k) if not isinstance(k, str) else k: jsonable(v) for k, v in value.items()}
    if isinstance(value, tuple) and all(isinstance(x, int) for x in value):
        return format_label(value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)
