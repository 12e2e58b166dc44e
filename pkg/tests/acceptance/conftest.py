"""
验收测试夹具：读取 experiments/ 下的运行配置
"""
import dataclasses
from pathlib import Path

import pytest

from config.config import default_harness_config
from config.loader import load_config
from simlab import MonteCarloSimulator

EXPERIMENTS = Path(__file__).resolve().parents[2] / "experiments"


@pytest.fixture
def experiment():
    """按名称加载实验配置，可覆盖 RunConfig 的任意字段"""
    def load(name: str, **overrides):
        run = load_config(str(EXPERIMENTS / f"{name}.yaml"))
        return dataclasses.replace(run, **overrides)
    return load


@pytest.fixture
def simulator():
    return MonteCarloSimulator(dataclasses.replace(default_harness_config, threads=4))
