import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

from graph.io import PathLike, write_json_atomic
from .metrics import MatchThresholds, Pool, Role, f_score, precision, recall, relevant


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f_score: float
    beta: float
    thresholds: MatchThresholds
    prediction_matches: Tuple[bool, ...]
    truth_matches: Tuple[bool, ...]
    empty_predictions: bool
    empty_truth: bool

    def to_dict(self) -> Dict[str, Any]:
        doc = asdict(self)
        doc["prediction_matches"] = list(self.prediction_matches)
        doc["truth_matches"] = list(self.truth_matches)
        return doc

    def to_text(self) -> str:
        rows = [
            ("predictions", str(len(self.prediction_matches))),
            ("truth", str(len(self.truth_matches))),
            ("matched predictions", str(sum(self.prediction_matches))),
            ("matched truth", str(sum(self.truth_matches))),
            ("precision", f"{self.precision:.4f}"),
            ("recall", f"{self.recall:.4f}"),
            (f"F{self.beta:g}", f"{self.f_score:.4f}"),
            ("gamma extra/missing/size", "{:g}/{:g}/{:g}".format(
                self.thresholds.gamma_extra,
                self.thresholds.gamma_missing,
                self.thresholds.gamma_size,
            )),
        ]
        if self.empty_predictions:
            rows.append(("note", "empty prediction set"))
        if self.empty_truth:
            rows.append(("note", "empty truth set"))
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows) + "\n"

    def save(self, path: PathLike) -> None:
        write_json_atomic(path, self.to_dict())


def evaluate(
    preds: Pool,
    truth: Pool,
    thresholds: MatchThresholds,
    beta: float = 1.0,
) -> EvalReport:
    """
    Score predictions against the truth.

    Empty inputs never raise here: they score 0 and set the matching flag.
    """
    log = logging.getLogger("evaluation.report")
    p = precision(preds, truth, thresholds)
    r = recall(preds, truth, thresholds) if len(truth) else 0.0
    report = EvalReport(
        precision=p,
        recall=r,
        f_score=f_score(p, r, beta),
        beta=beta,
        thresholds=thresholds,
        prediction_matches=tuple(relevant(s, truth, thresholds, Role.PREDICTION) for s in preds),
        truth_matches=tuple(relevant(s, preds, thresholds, Role.TRUTH) for s in truth),
        empty_predictions=len(preds) == 0,
        empty_truth=len(truth) == 0,
    )
    log.info("Evaluation: P=%.4f R=%.4f F=%.4f", p, r, report.f_score)
    return report
