from typing import Any, Callable, Dict

from sigmak.metrics.classification import compute_classification_metric
from sigmak.metrics.closed_forms import compute_closed_forms_metric
from sigmak.metrics.conservation import compute_conservation_metric
from sigmak.metrics.exponents import compute_exponents_metric
from sigmak.metrics.quadrature import compute_quadrature_metric
from sigmak.metrics.thresholds import compute_thresholds_metric

SUITES: Dict[str, Callable[..., Dict[str, Any]]] = {
    "closed-forms": compute_closed_forms_metric,
    "conservation": compute_conservation_metric,
    "thresholds": compute_thresholds_metric,
    "quadrature": compute_quadrature_metric,
    "exponents": compute_exponents_metric,
    "classification": compute_classification_metric,
}
