"""Instance files (JSON), matrix and vector CSV, seeded random instances.

Rationals travel as strings ("1/2", "3", "0.25") so nothing passes
through binary floats; words are digit strings for alphabets up to ten
symbols and comma-separated integers beyond that.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import ErgoptError, InstanceFormatError
from .potential import (
    OneSidedPotential,
    TwoSidedPotential,
    admissible_words,
    build_one_sided,
    build_two_sided,
)
from .symbolic import SftSystem, Word, build_sft


@dataclass(frozen=True, eq=False)
class Instance:
    sft: SftSystem
    potential: OneSidedPotential | TwoSidedPotential


def parse_fraction(value, where: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise InstanceFormatError(f"{where}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InstanceFormatError(
            f"{where}: write non-integer numbers as strings like \"1/2\" or \"0.25\""
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceFormatError(f"{where}: not a rational: {value!r}") from exc
    raise InstanceFormatError(f"{where}: expected a rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    return str(Fraction(value))


def format_word(word: Sequence[int], alphabet_size: int) -> str:
    if alphabet_size <= 10:
        return "".join(str(s) for s in word)
    return ",".join(str(s) for s in word)


def parse_word(text: str, where: str = "word") -> Word:
    try:
        if "," in text:
            return tuple(int(part) for part in text.split(","))
        return tuple(int(ch) for ch in text)
    except ValueError as exc:
        raise InstanceFormatError(f"{where}: malformed word {text!r}") from exc


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise InstanceFormatError(f"{where}: missing key {key!r}")
    return data[key]


def parse_instance(data: dict) -> Instance:
    """Build a validated Instance from decoded JSON.

    Structural problems raise InstanceFormatError; domain violations
    (irreducibility, lambda range, empty rows) keep their own types.
    """
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object")
    size = _require(data, "alphabet_size", "instance")
    if isinstance(size, bool) or not isinstance(size, int):
        raise InstanceFormatError("alphabet_size must be an integer")
    matrix = _require(data, "transition", "instance")
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise InstanceFormatError("transition must be a list of rows")
    lam = parse_fraction(_require(data, "lambda", "instance"), "lambda")
    try:
        sft = build_sft(size, matrix, lam)
    except ErgoptError:
        raise
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"transition: {exc}") from exc

    pot_data = _require(data, "potential", "instance")
    if not isinstance(pot_data, dict):
        raise InstanceFormatError("potential must be a JSON object")
    side = _require(pot_data, "side", "potential")
    raw_entries = _require(pot_data, "entries", "potential")
    if not isinstance(raw_entries, dict):
        raise InstanceFormatError("potential entries must be an object")
    entries = {
        parse_word(key, f"potential entry {key!r}"): parse_fraction(val, f"entry {key!r}")
        for key, val in raw_entries.items()
    }
    try:
        if side == "one":
            m = _require(pot_data, "range", "potential")
            holder = data.get("holder") or {}
            theta = holder.get("theta")
            const = holder.get("const")
            potential = build_one_sided(
                sft, m, entries,
                holder_theta=None if theta is None else parse_fraction(theta, "holder.theta"),
                holder_const=None if const is None else parse_fraction(const, "holder.const"),
            )
        elif side == "two":
            p = _require(pot_data, "past_depth", "potential")
            q = _require(pot_data, "future_depth", "potential")
            potential = build_two_sided(sft, p, q, entries)
        else:
            raise InstanceFormatError(f"potential side must be 'one' or 'two', got {side!r}")
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"potential: {exc}") from exc
    return Instance(sft, potential)


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"cannot read instance file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from exc
    return parse_instance(data)


def dump_instance(instance: Instance) -> dict:
    """JSON-ready dict that parse_instance reads back identically."""
    sft = instance.sft
    pot = instance.potential
    data: dict = {
        "alphabet_size": sft.alphabet_size,
        "transition": [list(row) for row in sft.transition],
        "lambda": format_fraction(sft.lam),
    }
    if isinstance(pot, OneSidedPotential):
        declared = pot.declared_range
        entries = {}
        for w in admissible_words(sft, declared):
            if declared == pot.range:
                value = pot.table[w]
            else:
                # promoted tables are constant across extensions
                ext = w
                while len(ext) < pot.range:
                    ext = ext + (sft.successors[ext[-1]][0],)
                value = pot.table[ext]
            entries[format_word(w, sft.alphabet_size)] = format_fraction(value)
        data["potential"] = {"side": "one", "range": declared, "entries": entries}
        if pot.holder_theta is not None or pot.holder_const is not None:
            data["holder"] = {}
            if pot.holder_theta is not None:
                data["holder"]["theta"] = format_fraction(pot.holder_theta)
            if pot.holder_const is not None:
                data["holder"]["const"] = format_fraction(pot.holder_const)
    else:
        entries = {
            format_word(w, sft.alphabet_size): format_fraction(v)
            for w, v in sorted(pot.table.items())
        }
        data["potential"] = {
            "side": "two",
            "past_depth": pot.past_depth,
            "future_depth": pot.future_depth,
            "entries": entries,
        }
    return data


def matrix_csv_text(node_words: Sequence[Word], matrix, alphabet_size: int) -> str:
    header = "word," + ",".join(format_word(w, alphabet_size) for w in node_words)
    lines = [header]
    for w, row in zip(node_words, matrix):
        lines.append(
            format_word(w, alphabet_size) + ","
            + ",".join(format_fraction(v) for v in row)
        )
    return "\n".join(lines) + "\n"


def read_matrix_csv(path) -> tuple[list[Word], list[list[Fraction]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("word,"):
        raise InstanceFormatError("matrix CSV must start with a 'word,...' header")
    words = [parse_word(cell) for cell in lines[0].split(",")[1:]]
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split(",")
        rows.append([parse_fraction(c, "matrix cell") for c in cells[1:]])
    return words, rows


def subaction_csv_text(node_words: Sequence[Word], values, alphabet_size: int) -> str:
    lines = ["word,value"]
    for w, v in zip(node_words, values):
        lines.append(f"{format_word(w, alphabet_size)},{format_fraction(v)}")
    return "\n".join(lines) + "\n"


def read_subaction_csv(path) -> tuple[list[Word], list[Fraction]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "word,value":
        raise InstanceFormatError("sub-action CSV must start with a 'word,value' header")
    words: list[Word] = []
    values: list[Fraction] = []
    for line in lines[1:]:
        if not line:
            continue
        cell, _, value = line.partition(",")
        words.append(parse_word(cell))
        values.append(parse_fraction(value, f"value for {cell}"))
    return words, values


def random_instance(rng: random.Random) -> Instance:
    """Small irreducible system with a one-sided integer table.

    Alphabet 2 or 3, range 1 or 2, weights 0..4, lambda 1/2: the scale
    every brute-force oracle handles comfortably.
    """
    while True:
        s = rng.choice((2, 3))
        matrix = [[1 if rng.random() < 0.6 else 0 for _ in range(s)] for _ in range(s)]
        try:
            sft = build_sft(s, matrix, Fraction(1, 2))
        except ErgoptError:
            continue
        break
    m = rng.choice((1, 2))
    entries = {w: Fraction(rng.randint(0, 4)) for w in admissible_words(sft, m)}
    return Instance(sft, build_one_sided(sft, m, entries))


def random_two_sided(rng: random.Random) -> Instance:
    """Depth-(1,1) two-sided table on a random small system."""
    while True:
        s = rng.choice((2, 3))
        matrix = [[1 if rng.random() < 0.6 else 0 for _ in range(s)] for _ in range(s)]
        try:
            sft = build_sft(s, matrix, Fraction(1, 2))
        except ErgoptError:
            continue
        break
    entries = {w: Fraction(rng.randint(0, 4)) for w in admissible_words(sft, 2)}
    return Instance(sft, build_two_sided(sft, 1, 1, entries))
