"""Readers for dataset CSVs, distribution files and hypothesis-space descriptions.

Dataset CSV: header ``f0,...,f{k-1},label``; one example per row; labels -1/+1.

Distribution file (JSON)::

    {"atoms": [{"features": [0.1], "label": 1, "probability": "0.25"}, ...]}

Space description (JSON)::

    {"family": "stumps", "cuts": [0.25, 0.5], "feature": 0, "prior": [...]}
    {"family": "stumps", "grid": {"start": 0, "stop": 1, "num": 20}}
    {"family": "rectangles", "x_grid": [...], "y_grid": [...]}
    {"family": "lookup", "domain_size": 12}
    {"family": "constant"}
    {"family": "table", "table": [[1, -1], [-1, -1]]}

Table-based families (``lookup``, ``table``) read the instance index from
feature ``f0``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .hypotheses import (
    DiscreteJointDistribution,
    HypothesisSpace,
    Sample,
    TableSpace,
    constant_space,
    lookup_table_space,
    rectangle_space,
    stump_space,
)

FAMILIES = ("stumps", "rectangles", "lookup", "constant", "table")


class FormatError(ValueError):
    pass


def _read_rows(path, require_label: bool):
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}:1: missing header row") from None
        header = [h.strip() for h in header]
        has_label = bool(header) and header[-1] == "label"
        features = header[:-1] if has_label else header
        if require_label and not has_label:
            raise FormatError(f"{path}:1: last column must be 'label'")
        expected = [f"f{i}" for i in range(len(features))]
        if features != expected:
            raise FormatError(f"{path}:1: feature columns must be named {','.join(expected) or 'f0'}")
        if not features:
            raise FormatError(f"{path}:1: need at least one feature column")
        X, y = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise FormatError(f"{path}:{lineno}: expected {len(header)} fields, found {len(row)}")
            try:
                X.append([float(v) for v in row[: len(features)]])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: feature values must be decimal numbers") from None
            if has_label:
                raw = row[-1].strip()
                if raw not in ("1", "+1", "-1"):
                    raise FormatError(f"{path}:{lineno}: label {raw!r} is not -1 or +1")
                y.append(int(raw))
    if not X:
        raise FormatError(f"{path}: dataset has no rows")
    return np.array(X), (np.array(y, dtype=np.int8) if has_label else None)


def read_dataset(path) -> Sample:
    X, y = _read_rows(path, require_label=True)
    return Sample(X, y)


def read_points(path) -> np.ndarray:
    """Feature rows of a CSV; a trailing label column is allowed and ignored."""
    return _read_rows(path, require_label=False)[0]


def write_dataset(path, sample: Sample) -> None:
    X = np.asarray(sample.X, dtype=float).reshape(sample.m, -1)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(X.shape[1])] + ["label"])
        for row, label in zip(X, sample.y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])


def _load_json(path):
    try:
        with Path(path).open(encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}: {exc.msg}") from None


def distribution_from_dict(doc: dict) -> DiscreteJointDistribution:
    atoms = doc.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise FormatError("distribution needs a nonempty 'atoms' list")
    X, y, p = [], [], []
    for i, atom in enumerate(atoms):
        try:
            X.append([float(v) for v in atom["features"]])
            y.append(int(atom["label"]))
            p.append(float(str(atom["probability"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"atom {i}: {exc}") from None
    try:
        return DiscreteJointDistribution(np.array(X), np.array(y), np.array(p))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def read_distribution(path) -> DiscreteJointDistribution:
    return distribution_from_dict(_load_json(path))


def distribution_to_dict(dist: DiscreteJointDistribution) -> dict:
    X = np.asarray(dist.X, dtype=float).reshape(len(dist), -1)
    return {"atoms": [
        {"features": [float(v) for v in x], "label": int(lab), "probability": repr(float(pr))}
        for x, lab, pr in zip(X, dist.y, dist.p)
    ]}


def space_from_dict(doc: dict) -> HypothesisSpace:
    family = doc.get("family")
    prior = doc.get("prior")
    try:
        if family == "stumps":
            if "cuts" in doc:
                cuts = doc["cuts"]
            else:
                g = doc["grid"]
                cuts = np.linspace(float(g["start"]), float(g["stop"]), int(g["num"]))
            return stump_space(cuts, int(doc.get("feature", 0)), prior)
        if family == "rectangles":
            return rectangle_space(doc["x_grid"], doc["y_grid"], prior)
        if family == "lookup":
            return lookup_table_space(int(doc["domain_size"]), prior)
        if family == "constant":
            return constant_space(prior)
        if family == "table":
            return TableSpace(np.array(doc["table"]), prior)
    except KeyError as exc:
        raise FormatError(f"space family {family!r} is missing parameter {exc}") from None
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unknown hypothesis family {family!r}; supported: {', '.join(FAMILIES)}")


def read_space(path) -> HypothesisSpace:
    return space_from_dict(_load_json(path))


def load_json(path):
    return _load_json(path)
