"""
主运行脚本：置信球序列的覆盖率、宽度曲线、方法对比与速率拟合实验

用法:
    python main.py coverage --config experiments/eb_coverage.yaml --assert
    python main.py compare  --config experiments/width_beta.yaml --out results/fig1.csv
    python main.py rate     --config experiments/rate_eb.yaml --threads 4
"""
import argparse
import dataclasses
import logging
import sys

from config.config import RunConfig, default_harness_config
from config.loader import load_config
from core.errors import CSSError
from simlab import CoverageRow, MonteCarloSimulator, RateFit, WidthRecord, fit_width_records
from utils.csv_writer import emit_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ASSERT_FAILED = 2

logger = logging.getLogger("main")


def print_banner(run: RunConfig):
    """打印实验配置"""
    print("=" * 60)
    print("实验配置")
    print("=" * 60)
    print(f"命令: {run.command}")
    for cfg in run.estimators:
        schedule = cfg.schedule.name if cfg.schedule is not None else "-"
        print(f"估计器: {cfg.label} (method={cfg.method.value}, d={cfg.d}, alpha={cfg.alpha}, schedule={schedule})")
    print(f"数据分布: {run.distribution.kind} (d={run.distribution.d})")
    print(f"时间范围: {run.horizon}, 重复次数: {run.replications}, 种子: {run.seed}, 线程: {run.threads}")
    print(f"输出文件: {run.output_path}")
    print("=" * 60)


def print_width_table(records):
    """打印每个方法在最后一个检查点的平均半径"""
    last = {}
    for rec in records:
        last[rec.method] = rec
    print("\n" + "=" * 60)
    print(f"{'Method':<24} {'t':<12} {'Mean radius':<16} {'SE':<12}")
    print("-" * 60)
    for rec in last.values():
        print(f"{rec.method:<24} {rec.t:<12} {rec.mean_radius:<16.6g} {rec.radius_se:<12.3g}")
    print("=" * 60)


def print_fit_table(fits):
    print("\n" + "=" * 72)
    print(f"{'Method':<24} {'Model':<20} {'Slope':<10} {'SE':<10} {'Spread':<8}")
    print("-" * 72)
    for fit in fits:
        print(f"{fit.method:<24} {fit.model:<20} {fit.slope:<10.4f} {fit.stderr:<10.4f} {fit.spread:<8.3f}")
    print("=" * 72)


def run_coverage_command(run: RunConfig, simulator: MonteCarloSimulator) -> bool:
    reports = [
        simulator.run_coverage(cfg, run.distribution, run.horizon, run.replications, run.seed, run.threads)
        for cfg in run.estimators
    ]
    rows = []
    for report in reports:
        report.print_summary()
        rows.extend(report.rows())
    emit_csv(rows, run.output_path, CoverageRow.COLUMNS)
    return all(report.passes() for report in reports)


def run_width_command(run: RunConfig, simulator: MonteCarloSimulator):
    records = simulator.run_width_curve(run.estimators, run.distribution, run.horizon,
                                        run.replications, run.seed, run.threads)
    print_width_table(records)
    return records


def run_rate_command(run: RunConfig, simulator: MonteCarloSimulator) -> bool:
    records = run_width_command(run, simulator)
    fits = fit_width_records(records, run.rate_model, window=run.rate_window)
    print_fit_table(fits)
    emit_csv(fits, run.output_path, RateFit.COLUMNS)
    if run.rate_model == "lil":
        return all(fit.spread <= run.max_spread for fit in fits)
    return all(fit.within(run.slope_range) for fit in fits)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='置信球序列实验平台')
    sub = parser.add_subparsers(dest='command', required=True)
    helps = {
        'coverage': '同时覆盖率研究',
        'width': '宽度曲线',
        'compare': '多个方法的宽度曲线对比',
        'rate': '宽度曲线的速率拟合',
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument('--config', required=True, help='YAML 配置文件')
        p.add_argument('--seed', type=int, default=None, help='覆盖配置中的根种子')
        p.add_argument('--threads', type=int, default=None, help='并行重复实验的线程数')
        p.add_argument('--out', default=None, help='输出 CSV 路径')
        p.add_argument('--assert', dest='check', action='store_true',
                       help='验收阈值未通过时返回非零退出码')
        p.add_argument('--log-level', default='WARNING',
                       choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='日志级别')
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        run = load_config(args.config, command=args.command)
        overrides = {}
        if args.seed is not None:
            overrides['seed'] = args.seed
        if args.threads is not None:
            overrides['threads'] = args.threads
        if args.out is not None:
            overrides['output_path'] = args.out
        run = dataclasses.replace(run, **overrides)
        if run.threads < 1:
            raise CSSError("threads must be positive")
        if run.command == 'compare' and len(run.estimators) < 2:
            raise CSSError("compare needs at least two estimators")

        print_banner(run)
        simulator = MonteCarloSimulator(dataclasses.replace(default_harness_config, threads=run.threads))

        passed = True
        if run.command == 'coverage':
            passed = run_coverage_command(run, simulator)
        elif run.command in ('width', 'compare'):
            records = run_width_command(run, simulator)
            emit_csv(records, run.output_path, WidthRecord.COLUMNS)
        else:
            passed = run_rate_command(run, simulator)
    except CSSError as exc:
        print(f"错误: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"无法写入输出: {exc}", file=sys.stderr)
        return EXIT_ERROR

    print(f"\n结果已保存到: {run.output_path}")
    if args.check and not passed:
        print("验收未通过", file=sys.stderr)
        return EXIT_ASSERT_FAILED
    print("\n实验完成！")
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
