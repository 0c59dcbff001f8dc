"""
Update-stream generation and the text format.

    # mode=decremental n=5 W=8
    i 0 1 3
    i 1 2 5
    d 0 1
    w 1 2 7

One op per line: `i u v w` inserts, `d u v` deletes, `w u v w'` sets a weight.
A decremental stream lists its starting graph as leading `i` lines.
"""
from __future__ import annotations

import logging
import random
from pathlib import Path
from typing import Union

from .errors import InvalidParameter, StreamParseError
from .graph import Mode, OpKind, UpdateOp, UpdateStream

logger = logging.getLogger(__name__)


def gen_stream(
    n: int,
    m: int,
    W: float = 1.0,
    mode: Mode = Mode.INCREMENTAL,
    seed: int = 0,
    weight_changes: int = 0,
) -> UpdateStream:
    """
    Seeded random stream with exactly m structural ops: m distinct inserts, or
    a random m-edge graph torn down in random order. `weight_changes` extra
    weight decreases (incremental) or increases (decremental) are interleaved.
    """
    mode = Mode(mode)
    if m > n * (n - 1):
        raise InvalidParameter(f"cannot pick {m} distinct edges on {n} vertices")
    rng = random.Random(seed)
    top = max(1, int(W))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = rng.sample(pairs, m)
    weight = {e: rng.randint(1, top) for e in edges}

    events = ["s"] * m + ["w"] * weight_changes
    rng.shuffle(events)
    stream = UpdateStream(mode, n, float(W))

    if mode is Mode.INCREMENTAL:
        present: list[tuple[int, int]] = []
        order = iter(edges)
        for ev in events:
            if ev == "s":
                e = next(order)
                present.append(e)
                stream.ops.append(UpdateOp.insert(*e, weight[e]))
                continue
            heavy = [e for e in present if weight[e] > 1]
            if heavy:
                e = rng.choice(heavy)
                weight[e] = rng.randint(1, weight[e] - 1)
                stream.ops.append(UpdateOp.set_weight(*e, weight[e]))
    else:
        stream.initial = [(u, v, float(weight[(u, v)])) for u, v in edges]
        doomed = list(edges)
        rng.shuffle(doomed)
        alive = set(edges)
        for ev in events:
            if ev == "s":
                e = doomed.pop()
                alive.discard(e)
                stream.ops.append(UpdateOp.delete(*e))
                continue
            light = sorted(e for e in alive if weight[e] < top)
            if light:
                e = rng.choice(light)
                weight[e] = rng.randint(weight[e] + 1, top)
                stream.ops.append(UpdateOp.set_weight(*e, weight[e]))
    logger.debug("generated %s stream: n=%d m=%d ops=%d seed=%d", mode.value, n, m, len(stream), seed)
    return stream


def _fmt_weight(w: float) -> str:
    w = float(w)
    return str(int(w)) if w.is_integer() else repr(w)


def format_stream(stream: UpdateStream) -> str:
    lines = [f"# mode={stream.mode.value} n={stream.n} W={_fmt_weight(stream.W)}"]
    for u, v, w in stream.initial:
        lines.append(f"i {u} {v} {_fmt_weight(w)}")
    for op in stream.ops:
        if op.kind is OpKind.DELETE:
            lines.append(f"d {op.u} {op.v}")
        else:
            lines.append(f"{op.kind.value} {op.u} {op.v} {_fmt_weight(op.w)}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str, line_no: int) -> tuple[Mode, int, float]:
    fields = {}
    for token in line.lstrip("#").split():
        key, sep, value = token.partition("=")
        if sep:
            fields[key] = value
    try:
        return Mode(fields["mode"]), int(fields["n"]), float(fields.get("W", "1"))
    except (KeyError, ValueError) as exc:
        raise StreamParseError(f"bad header ({exc})", line_no, line) from exc


def parse_stream(text: str) -> UpdateStream:
    stream = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if stream is None:
                mode, n, W = _parse_header(line, line_no)
                stream = UpdateStream(mode, n, W)
            continue
        if stream is None:
            raise StreamParseError("missing '# mode=... n=... W=...' header", line_no, raw)

        parts = line.split()
        kind = parts[0]
        want = 3 if kind == OpKind.DELETE.value else 4
        if kind not in {k.value for k in OpKind} or len(parts) != want:
            raise StreamParseError("malformed op", line_no, raw)
        try:
            u, v = int(parts[1]), int(parts[2])
            w = float(parts[3]) if want == 4 else None
        except ValueError as exc:
            raise StreamParseError(f"bad number ({exc})", line_no, raw) from exc
        if not (0 <= u < stream.n and 0 <= v < stream.n):
            raise StreamParseError(f"vertex outside [0, {stream.n})", line_no, raw)

        if stream.mode is Mode.DECREMENTAL:
            if kind == OpKind.INSERT.value:
                if stream.ops:
                    raise StreamParseError("insert after the first delete/weight op", line_no, raw)
                stream.initial.append((u, v, w))
                continue
        elif kind == OpKind.DELETE.value:
            raise StreamParseError("delete in an incremental stream", line_no, raw)
        stream.ops.append(UpdateOp(OpKind(kind), u, v, w))

    if stream is None:
        raise StreamParseError("empty stream")
    return stream


def load_stream(path: Union[str, Path]) -> UpdateStream:
    return parse_stream(Path(path).read_text(encoding="utf-8"))


def save_stream(stream: UpdateStream, path: Union[str, Path]) -> None:
    Path(path).write_text(format_stream(stream), encoding="utf-8")
