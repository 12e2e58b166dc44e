"""
运行配置解析：YAML 文档 → RunConfig

文档包含三个段落：
    run:           command / horizon / replications / seed / output / threads / rate_*
    estimator:     单个估计器（或 estimators: 列表）
    distribution:  kind 加分布参数（huber_mix 的 base / contaminant 可嵌套）
schedule 可以写成名称，缺失的调度参数（alpha、v、p、B、eps，n = horizon）
从估计器段落补全。所有出错字段会一次性报告。
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml

from core.errors import CSSError, ConfigError
from estimators import EstimatorConfig, Method, build_schedule, schedule_fields
from simlab.generator import build_distribution
from special.psi import GaussianPsi, build_psi

from .config import RunConfig

COMMANDS = ("coverage", "width", "compare", "rate")
RATE_MODELS = ("sqrt_log_t_over_t", "lil")

# 各方法必须给出的参数
REQUIRED = {
    Method.EB: ("d", "alpha", "B", "schedule"),
    Method.SUB_PSI: ("d", "alpha", "psi", "schedule"),
    Method.CATONI: ("d", "alpha", "v", "p", "schedule"),
    Method.ROBUST_EB: ("d", "alpha", "B", "schedule"),
    Method.SEMI_EMPIRICAL: ("d", "alpha", "v", "p", "trace_sigma", "schedule"),
    Method.STITCHED_EB: ("d", "alpha", "B"),
    Method.STITCHED_SUB_GAMMA: ("d", "alpha", "psi"),
    Method.MOM: ("d", "alpha", "trace_sigma"),
}

FLOAT_KEYS = ("alpha", "B", "v", "p", "beta", "trace_sigma", "eps", "kappa")
ESTIMATOR_KEYS = {"method", "d", "schedule", "psi", "conservative", "covariance", "name"} | set(FLOAT_KEYS)

Problems = List[Tuple[str, str]]


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _int_field(block: Dict, key: str, prefix: str, problems: Problems, default=None, minimum: int = 1):
    value = block.get(key, default)
    if value is None:
        problems.append((prefix + key, f"missing required parameter {key}"))
        return None
    if not (isinstance(value, int) and not isinstance(value, bool)) or value < minimum:
        problems.append((prefix + key, f"{key} must be an integer >= {minimum}, got {value!r}"))
        return None
    return value


def _parse_psi(raw, field: str, problems: Problems):
    try:
        if isinstance(raw, str):
            return build_psi(raw)
        if isinstance(raw, dict) and "kind" in raw:
            params = dict(raw)
            return build_psi(params.pop("kind"), **params)
        problems.append((field, "psi must be a name or a mapping with a kind"))
    except CSSError as exc:
        problems.append((field, str(exc)))
    return None


def _parse_schedule(raw, block: Dict, psi, horizon: Optional[int], field: str, problems: Problems):
    if isinstance(raw, str):
        name, params = raw, {}
    elif isinstance(raw, dict) and "name" in raw:
        params = dict(raw)
        name = params.pop("name")
    else:
        problems.append((field, "schedule must be a name or a mapping with a name"))
        return None
    try:
        accepted = schedule_fields(name)
    except ConfigError as exc:
        problems.append((field, str(exc)))
        return None

    for key in accepted:
        if key in params:
            continue
        if key == "n" and horizon is not None:
            params["n"] = horizon
        elif key == "sigma" and isinstance(psi, GaussianPsi):
            params["sigma"] = psi.sigma
        elif key in block and key in FLOAT_KEYS and _is_number(block[key]):
            params[key] = float(block[key])
    try:
        return build_schedule(name, **params)
    except ConfigError as exc:
        problems.extend((f"{field}.{name_}" if name_ != "schedule" else field, msg)
                        for name_, msg in exc.problems)
    return None


def parse_estimator(block: Any, horizon: Optional[int] = None, prefix: str = "") -> Tuple[Optional[EstimatorConfig], Problems]:
    """
    解析一个估计器段落

    Returns:
        (EstimatorConfig 或 None, 问题列表)
    """
    problems: Problems = []
    if not isinstance(block, dict):
        return None, [(prefix.rstrip(".") or "estimator", "estimator block must be a mapping")]

    for key in sorted(set(block) - ESTIMATOR_KEYS):
        problems.append((prefix + key, f"unknown parameter {key}"))

    raw_method = block.get("method")
    if raw_method is None:
        return None, problems + [(prefix + "method", "missing required parameter method")]
    try:
        method = Method(raw_method)
    except ValueError:
        return None, problems + [(prefix + "method", f"unknown method: {raw_method}")]

    for key in REQUIRED[method]:
        if block.get(key) is None:
            problems.append((prefix + key, f"missing required parameter {key}"))

    d = _int_field(block, "d", prefix, problems) if block.get("d") is not None else None
    values = {}
    for key in FLOAT_KEYS:
        if block.get(key) is None:
            continue
        if not _is_number(block[key]):
            problems.append((prefix + key, f"{key} must be a number, got {block[key]!r}"))
        else:
            values[key] = float(block[key])

    psi = _parse_psi(block["psi"], prefix + "psi", problems) if block.get("psi") is not None else None
    schedule = None
    if block.get("schedule") is not None:
        schedule = _parse_schedule(block["schedule"], block, psi, horizon, prefix + "schedule", problems)

    covariance = None
    if block.get("covariance") is not None:
        try:
            covariance = np.asarray(block["covariance"], dtype=np.float64)
        except (TypeError, ValueError):
            problems.append((prefix + "covariance", "covariance must be a numeric matrix"))

    if problems or d is None:
        if d is None and not any(name == prefix + "d" for name, _ in problems):
            problems.append((prefix + "d", "missing required parameter d"))
        # 尽量报告更多字段问题
        if "alpha" in values and not 0.0 < values["alpha"] < 1.0:
            if not any(name == prefix + "alpha" for name, _ in problems):
                problems.append((prefix + "alpha", "alpha must lie in (0,1)"))
        return None, problems

    cfg = EstimatorConfig(
        method=method,
        d=d,
        alpha=values.get("alpha"),
        schedule=schedule,
        B=values.get("B"),
        psi=psi,
        v=values.get("v"),
        p=values.get("p"),
        beta=values.get("beta", 1.0),
        trace_sigma=values.get("trace_sigma"),
        eps=values.get("eps", 0.0),
        kappa=values.get("kappa"),
        conservative=bool(block.get("conservative", False)),
        sigma=covariance,
        name=str(block["name"]) if block.get("name") is not None else None,
    )
    problems.extend((prefix + name, msg) for name, msg in cfg.problems())
    return (None if problems else cfg), problems


def parse_distribution(block: Any, default_d: Optional[int], problems: Problems):
    if block is None:
        problems.append(("distribution", "missing distribution section"))
        return None
    if isinstance(block, str):
        block = {"kind": block}
    if not isinstance(block, dict) or "kind" not in block:
        problems.append(("distribution.kind", "distribution needs a kind"))
        return None
    params = dict(block)
    kind = params.pop("kind")
    if kind not in ("point_mass", "huber_mix") and "d" not in params and default_d is not None:
        params["d"] = default_d
    try:
        return build_distribution(kind, **params)
    except ConfigError as exc:
        problems.extend((name if name.startswith("distribution") else f"distribution.{name}", msg)
                        for name, msg in exc.problems)
    except (TypeError, ValueError) as exc:
        problems.append(("distribution", str(exc)))
    return None


def parse_config(text: str, command: Optional[str] = None) -> RunConfig:
    """
    解析并验证运行配置

    Args:
        text: YAML 文档
        command: 命令行子命令；给出时覆盖 run.command，此时 run.command 可省略

    Returns:
        完整验证过的 RunConfig；有任何问题时抛出携带全部字段的 ConfigError
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}", field="yaml") from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping", field="config")

    problems: Problems = []
    for key in sorted(set(doc) - {"run", "estimator", "estimators", "distribution"}):
        problems.append((key, f"unknown section {key}"))

    run = doc.get("run") or {}
    if not isinstance(run, dict):
        problems.append(("run", "run section must be a mapping"))
        run = {}
    field = "command" if command is not None else "run.command"
    if command is None:
        command = run.get("command")
    if command not in COMMANDS:
        problems.append((field, f"command must be one of {', '.join(COMMANDS)}"))
    horizon = _int_field(run, "horizon", "run.", problems, default=10_000)
    replications = _int_field(run, "replications", "run.", problems, default=100)
    threads = _int_field(run, "threads", "run.", problems, default=1)
    seed = run.get("seed", 42)
    if not (isinstance(seed, int) and not isinstance(seed, bool)) or seed < 0:
        problems.append(("run.seed", f"seed must be a non-negative integer, got {seed!r}"))
    rate_model = run.get("rate_model", "sqrt_log_t_over_t")
    if rate_model not in RATE_MODELS:
        problems.append(("run.rate_model", f"rate_model must be one of {', '.join(RATE_MODELS)}"))
    slope_range = tuple(run.get("slope_range", (0.9, 1.1)))
    if len(slope_range) != 2 or not all(_is_number(v) for v in slope_range) or slope_range[0] > slope_range[1]:
        problems.append(("run.slope_range", "slope_range must be [low, high]"))
    max_spread = run.get("max_spread", 5.0)
    if not _is_number(max_spread) or max_spread < 1:
        problems.append(("run.max_spread", "max_spread must be a number >= 1"))
    rate_window = run.get("rate_window")
    if rate_window is not None:
        rate_window = tuple(rate_window)
        if len(rate_window) != 2 or not all(_is_number(v) and v >= 1 for v in rate_window):
            problems.append(("run.rate_window", "rate_window must be [t_low, t_high]"))

    if "estimators" in doc and "estimator" in doc:
        problems.append(("estimators", "use either estimator or estimators, not both"))
    blocks = doc.get("estimators")
    if blocks is None:
        blocks = [doc["estimator"]] if doc.get("estimator") is not None else []
    if not isinstance(blocks, list) or not blocks:
        problems.append(("estimator", "at least one estimator block is required"))
        blocks = []

    estimators = []
    many = len(blocks) > 1 or "estimators" in doc
    for i, block in enumerate(blocks):
        prefix = f"estimators[{i}]." if many else ""
        cfg, found = parse_estimator(block, horizon=horizon, prefix=prefix)
        problems.extend(found)
        if cfg is not None:
            estimators.append(cfg)
            if command == "coverage" and cfg.method is Method.MOM:
                problems.append((prefix + "method", "coverage runs do not support the mom baseline"))

    default_d = estimators[0].d if estimators else None
    distribution = parse_distribution(doc.get("distribution"), default_d, problems)

    ConfigError.collect(problems)
    return RunConfig(
        command=command,
        estimators=estimators,
        distribution=distribution,
        horizon=horizon,
        replications=replications,
        seed=seed,
        output_path=str(run.get("output", RunConfig.output_path)),
        threads=threads,
        rate_model=rate_model,
        slope_range=(float(slope_range[0]), float(slope_range[1])),
        max_spread=float(max_spread),
        rate_window=None if rate_window is None else (float(rate_window[0]), float(rate_window[1])),
    )


def load_config(path: str, command: Optional[str] = None) -> RunConfig:
    """读取并解析配置文件，command 的含义同 parse_config"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", field="config") from None
    return parse_config(text, command=command)
