import math

import pytest
from transformers.hf_argparser import HfArgumentParser

from sigmak.utils.args import (
    IntegrationArguments,
    LoggingArguments,
    MetricArguments,
    default_num_workers,
    parse_optional_sign,
    parse_sign,
)
from sigmak.utils.errors import ContractError
from sigmak.utils.ode_engine import IntegrationConfig


@pytest.mark.parametrize(
    "value, expected",
    [("+", 1), ("+1", 1), ("1", 1), ("plus", 1), ("-", -1), ("-1", -1), ("Minus", -1), ("0", 0), (" zero ", 0)],
)
def test_parse_sign(value: str, expected: int) -> None:
    assert parse_sign(value) == expected


@pytest.mark.parametrize("value", ["2", "positive", ""])
def test_parse_sign_rejects(value: str) -> None:
    with pytest.raises(ContractError):
        parse_sign(value)


def test_parse_sign_without_zero() -> None:
    with pytest.raises(ContractError, match=r"\+ or -"):
        parse_sign("0", allow_zero=False)
    assert parse_optional_sign(None) is None
    assert parse_optional_sign("-") == -1


def test_default_num_workers(monkeypatch) -> None:
    monkeypatch.delenv("SIGMAK_NUM_WORKERS", raising=False)
    assert default_num_workers() == 1
    monkeypatch.setenv("SIGMAK_NUM_WORKERS", "4")
    assert default_num_workers() == 4


def test_metric_arguments() -> None:
    params = MetricArguments(n=3, k=2, sign="minus").params
    assert (params.n, params.k, params.s) == (3, 2, -1)
    with pytest.raises(ContractError):
        MetricArguments(sign="?")


def test_integration_arguments_build_config() -> None:
    assert IntegrationArguments().config() == IntegrationConfig()
    with pytest.raises(ContractError):
        IntegrationArguments(chart_switch=0.5).config()


def test_logging_arguments() -> None:
    assert LoggingArguments(log_level="info").log_level == "INFO"
    with pytest.raises(ContractError):
        LoggingArguments(log_level="loud")


def test_command_line_parsing() -> None:
    parser = HfArgumentParser((MetricArguments, IntegrationArguments))
    metric_args, integration_args = parser.parse_args_into_dataclasses(
        args=["-n", "7", "-k", "3", "--sign", "-1", "--tol", "1e-8", "--span", "4"]
    )
    assert metric_args.params.s == -1
    assert metric_args.n == 7 and metric_args.k == 3
    config = integration_args.config()
    assert config.rel_tol == 1e-8
    assert config.max_span == 4.0
    assert math.isinf(config.max_step)


def test_json_parsing(tmp_path) -> None:
    path = tmp_path / "metric.json"
    path.write_text('{"n": 4, "k": 2, "sign": "0", "rel_tol": 1e-9}')
    metric_args, integration_args = HfArgumentParser((MetricArguments, IntegrationArguments)).parse_json_file(
        json_file=str(path)
    )
    assert metric_args.params.s == 0
    assert integration_args.rel_tol == 1e-9
