"""
命令行入口脚本

用法示例:
    python verify.py gauss-sums --out user_data/reports/gauss.json
    python verify.py all --threads 8 --format csv --out user_data/reports/all.csv
"""

import os
import sys

sys.path.append(os.path.abspath(os.path.dirname(__file__)))

from modules.cli import main

if __name__ == "__main__":
    sys.exit(main())
