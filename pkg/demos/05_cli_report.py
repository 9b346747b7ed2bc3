"""Run the verification driver in-process and summarise its report.

The same report is produced by  python3 -m logjet --p 3 --n 2
"""
from logjet.cli import RunConfig, run

cfg = RunConfig(p=3, m=1, n=2, max_degree=2)
report = run(cfg)
for s in report.suites:
    print(f"{s.name:<10} {s.cases:>6} cases  {len(s.failures)} failures  {s.seconds:.2f}s")
print("pass" if report.passed else "FAIL", "exit", report.exit_code)
