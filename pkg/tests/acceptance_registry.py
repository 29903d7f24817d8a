"""Collects one status line per acceptance criterion for the terminal summary."""

LINES: dict[str, str] = {}
_PARTS: dict[str, dict[str, tuple[bool, str]]] = {}
_TITLES: dict[str, str] = {}


def record(criterion: str, title: str, part: str, ok: bool, detail: str) -> None:
    _TITLES[criterion] = title
    _PARTS.setdefault(criterion, {})[part] = (ok, detail)
    parts = _PARTS[criterion]
    status = "PASS" if all(v[0] for v in parts.values()) else "FAIL"
    details = "; ".join(f"{p}: {'ok' if v[0] else 'FAILED'} ({v[1]})" for p, v in parts.items())
    LINES[criterion] = f"[{status}] criterion {criterion:>2}: {title} -- {details}"
