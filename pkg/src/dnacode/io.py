"""Text file formats for messages, codes, and read pools.

All files are UTF-8 text.  Lines starting with '#' are comments; an
optional header line '%params M=..,L=..,l=..,K=..,tau=p/q,ei=..,ed=..'
declares parameters (command-line flags override it).  Every other
non-blank line is a binary string: a message file holds one strand per
line, a code file separates messages with one blank line, and a pool
file lists one read per line with repeats expressing multiplicity.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .channel import ChannelSample
from .errors import FileFormatError, ParamMismatch, ValidationError
from .model import Message, SystemParams, bits_to_string

PARAM_KEYS = ("M", "L", "l", "K", "tau", "ei", "ed")
ParamValue = Union[int, Fraction]
Block = list[tuple[int, str]]


def parse_tau(text: str) -> Fraction:
    """tau is accepted only as 'p/q' or '1'; decimals are rejected so
    floor(tau*K) is computed from the exact rational."""
    if text == "1":
        return Fraction(1)
    match = re.fullmatch(r"(\d+)/([1-9]\d*)", text)
    if match is None:
        raise ValidationError(f"tau must be a fraction p/q or 1, got {text!r}")
    return Fraction(int(match.group(1)), int(match.group(2)))


def tau_text(tau: Fraction) -> str:
    return "1" if tau == 1 else f"{tau.numerator}/{tau.denominator}"


def parse_param_items(
    text: str, path: Optional[str] = None, line: Optional[int] = None
) -> dict[str, ParamValue]:
    """Parse 'M=2,L=3,...' into typed values (tau as a Fraction)."""

    def fail(message: str) -> None:
        if path is not None:
            raise FileFormatError(message, path=path, line=line)
        raise ValidationError(message)

    items: dict[str, ParamValue] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, eq, value = part.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not value:
            fail(f"expected key=value, got {part!r}")
        if key not in PARAM_KEYS:
            fail(f"unknown parameter {key!r} (expected one of {', '.join(PARAM_KEYS)})")
        if key in items:
            fail(f"repeated parameter {key!r}")
        if key == "tau":
            try:
                items[key] = parse_tau(value)
            except ValidationError as e:
                fail(str(e))
        else:
            try:
                items[key] = int(value)
            except ValueError:
                fail(f"{key} must be an integer, got {value!r}")
    return items


def read_blocks(path: Union[str, Path]) -> tuple[dict[str, ParamValue], list[Block]]:
    """Parse a file into its header and blank-line-separated blocks of
    (line number, binary string)."""
    name = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FileFormatError(f"cannot read file: {e.strerror or e}", path=name)
    header: dict[str, ParamValue] = {}
    blocks: list[Block] = []
    current: Block = []
    token_len: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if current:
                blocks.append(current)
                current = []
            continue
        if line.startswith("%"):
            if not (line == "%params" or line.startswith("%params ")):
                raise FileFormatError(
                    f"unknown directive {line.split()[0]!r}", path=name, line=lineno
                )
            for key, value in parse_param_items(
                line[len("%params"):], path=name, line=lineno
            ).items():
                if key in header and header[key] != value:
                    raise ParamMismatch(
                        f"{name}:{lineno}: header repeats {key} with a different value"
                    )
                header[key] = value
            continue
        if set(line) - {"0", "1"}:
            raise FileFormatError(
                f"expected a binary string, got {line!r}", path=name, line=lineno
            )
        if token_len is None:
            token_len = len(line)
        elif len(line) != token_len:
            raise FileFormatError(
                f"length {len(line)} differs from {token_len} used above",
                path=name,
                line=lineno,
            )
        current.append((lineno, line))
    if current:
        blocks.append(current)
    declared = header.get("L")
    if isinstance(declared, int) and token_len is not None and declared != token_len:
        raise FileFormatError(
            f"lines have length {token_len} but the header says L={declared}", path=name
        )
    return header, blocks


def read_message_file(path: Union[str, Path]) -> tuple[dict[str, ParamValue], Block]:
    header, blocks = read_blocks(path)
    if len(blocks) != 1:
        raise FileFormatError(
            f"expected exactly one message, found {len(blocks)}", path=str(path)
        )
    return header, blocks[0]


def read_code_file(path: Union[str, Path]) -> tuple[dict[str, ParamValue], list[Block]]:
    return read_blocks(path)


def read_pool_file(path: Union[str, Path]) -> tuple[dict[str, ParamValue], Block]:
    header, blocks = read_blocks(path)
    return header, [entry for block in blocks for entry in block]


def params_header(params: SystemParams) -> str:
    return (
        f"%params M={params.m},L={params.length},l={params.index_len},"
        f"K={params.k},tau={tau_text(params.tau)},ei={params.e_i},ed={params.e_d}"
    )


def message_lines(msg: Message) -> list[str]:
    return [str(s) for s in msg.strands]


def code_lines(code: Sequence[Message], params: SystemParams) -> list[str]:
    lines = [params_header(params)]
    for z in code:
        lines.append("")
        lines.extend(message_lines(z))
    return lines


def pool_lines(reads: Sequence[int], params: SystemParams) -> list[str]:
    return [params_header(params)] + [bits_to_string(r, params.length) for r in reads]


def provenance_lines(sample: ChannelSample) -> list[str]:
    """Sidecar rows: read index, source strand, flipped positions."""
    rows = [f"# seed={sample.seed} rng={sample.rng}"]
    for i, p in enumerate(sample.provenance):
        flips = ",".join(str(pos) for pos in p.flips) if p.flips else "-"
        rows.append(f"{i}\t{p.source}\t{flips}")
    return rows


def write_text(path: Union[str, Path], lines: Sequence[str]) -> None:
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
