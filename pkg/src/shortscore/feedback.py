"""Readable per-response reports from prediction attributions.

A report ranks feature groups by absolute contribution to the raw score,
names each group's strongest member features with their (raw) values, and
raises narrative flags when a response sits below the training-set
percentile cutoff on a watched feature (for example low prompt overlap or
low lexical diversity). Rendering is deterministic: same model, same
response, byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .features.schema import GROUP_LABELS, FeatureSchema, SchemaMismatchError
from .forest import Contribution

FEEDBACK_FORMAT_VERSION = 1

# feature -> message shown when the value falls under its training cutoff.
FLAG_MESSAGES = {
    "prompt_coverage": "low overlap with the question prompt",
    "ttr": "low lexical diversity",
    "word_count": "very short response",
    "kw_match_count": "few topic keywords used",
    "content_overlap": "little content drawn from the reading passage",
}


@dataclass
class GroupEntry:
    group: str
    label: str
    contribution: float
    top_features: list[tuple[str, float, float]]   # (name, contribution, raw value)


@dataclass
class FeedbackReport:
    response_id: str
    predicted_grade: int
    raw_prediction: float
    bias: float
    groups: list[GroupEntry]
    flags: list[str]


def build_report(response_id: str, predicted_grade: int,
                 contribution: Contribution, schema: FeatureSchema,
                 raw_features: np.ndarray,
                 flag_cutoffs: dict[str, float] | None = None,
                 top_k_features: int = 3) -> FeedbackReport:
    """Rank group contributions (descending absolute value) and fire flags."""
    if len(contribution.per_feature) != len(schema):
        raise SchemaMismatchError("contribution does not match schema length")
    if len(raw_features) != len(schema):
        raise SchemaMismatchError("raw feature vector does not match schema length")

    groups = []
    for g in schema.present_groups():
        idx = schema.group_indices(g)
        total = float(contribution.per_feature[idx].sum())
        ranked = sorted(idx, key=lambda i: (-abs(contribution.per_feature[i]),
                                            schema.names[i]))
        top = [(schema.names[i], float(contribution.per_feature[i]),
                float(raw_features[i])) for i in ranked[:top_k_features]]
        groups.append(GroupEntry(group=g, label=GROUP_LABELS[g],
                                 contribution=total, top_features=top))
    groups.sort(key=lambda e: (-abs(e.contribution), e.group))

    flags = []
    for feat, message in FLAG_MESSAGES.items():
        cutoff = (flag_cutoffs or {}).get(feat)
        if cutoff is None or feat not in schema.names:
            continue
        if float(raw_features[schema.index_of(feat)]) < cutoff:
            flags.append(message)

    raw_prediction = contribution.bias + float(contribution.per_feature.sum())
    return FeedbackReport(response_id=response_id, predicted_grade=predicted_grade,
                          raw_prediction=raw_prediction, bias=contribution.bias,
                          groups=groups, flags=flags)


def _fmt(x: float) -> str:
    return f"{x:+.3f}"


def render(report: FeedbackReport, format: str = "plain_text",
           top_k_groups: int | None = None) -> str:
    if format == "structured":
        return json.dumps(to_dict(report), sort_keys=True, indent=2)
    if format != "plain_text":
        raise ValueError(f"unknown feedback format {format!r}")

    shown = report.groups if top_k_groups is None else report.groups[:top_k_groups]
    lines = [
        f"Response {report.response_id}: predicted grade {report.predicted_grade} "
        f"(raw score {report.raw_prediction:.3f})",
        f"Baseline (training mean): {report.bias:.3f}",
        "Feature group contributions:",
    ]
    for entry in shown:
        detail = ", ".join(f"{name}={value:.3f} ({_fmt(c)})"
                           for name, c, value in entry.top_features)
        lines.append(f"  {_fmt(entry.contribution)}  {entry.label}  [{detail}]")
    if report.flags:
        lines.append("Areas to improve:")
        lines.extend(f"  - {flag}" for flag in report.flags)
    return "\n".join(lines) + "\n"


def to_dict(report: FeedbackReport) -> dict:
    return {
        "format_version": FEEDBACK_FORMAT_VERSION,
        "response_id": report.response_id,
        "predicted_grade": report.predicted_grade,
        "raw_prediction": report.raw_prediction,
        "bias": report.bias,
        "groups": [{
            "group": e.group,
            "label": e.label,
            "contribution": e.contribution,
            "top_features": [{"name": n, "contribution": c, "value": v}
                             for n, c, v in e.top_features],
        } for e in report.groups],
        "flags": list(report.flags),
    }


def from_dict(d: dict) -> FeedbackReport:
    return FeedbackReport(
        response_id=d["response_id"],
        predicted_grade=int(d["predicted_grade"]),
        raw_prediction=float(d["raw_prediction"]),
        bias=float(d["bias"]),
        groups=[GroupEntry(group=g["group"], label=g["label"],
                           contribution=float(g["contribution"]),
                           top_features=[(f["name"], float(f["contribution"]),
                                          float(f["value"]))
                                         for f in g["top_features"]])
                for g in d["groups"]],
        flags=list(d["flags"]),
    )
