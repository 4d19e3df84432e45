"""
UI工具模块
提供报告表格显示、通过率统计与图表等 Streamlit 工具函数
"""

import json
from typing import Any, Optional

import numpy as np
import pandas as pd
import plotly.express as px
import streamlit as st

from modules.config import FORMAT_CONFIG, TABLE_CONFIG
from modules.utils import format_number


def report_dataframe(rows) -> pd.DataFrame:
    """
    把报告行转为显示用 DataFrame，inputs 展开为列

    Args:
        rows: ExperimentReport.rows

    Returns:
        pd.DataFrame: 每行一次检查
    """
    if not rows:
        return pd.DataFrame(columns=["id", "value", "bound", "ratio", "pass"])
    records = []
    for row in rows:
        record = {"id": row["id"]}
        for key, value in row["inputs"].items():
            record[key] = value if isinstance(value, (int, float, str, bool)) else json.dumps(value)
        record.update({"value": row["value"], "bound": row["bound"], "ratio": row["ratio"], "pass": row["pass"]})
        records.append(record)
    return pd.DataFrame(records)


def format_float(value: Any) -> str:
    """格式化数值；复数按 a+bj 显示"""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "-"
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        value = complex(value["re"], value["im"])
    if isinstance(value, (int, float, complex, np.number)):
        return format_number(value)
    return str(value)


def format_dataframe(df: pd.DataFrame) -> pd.DataFrame:
    """格式化数值列，通过列转为 ✅/❌"""
    result = df.copy()
    for col in FORMAT_CONFIG["float_columns"]:
        if col in result.columns:
            result[col] = result[col].apply(format_float)
    for col in FORMAT_CONFIG["bool_columns"]:
        if col in result.columns:
            result[col] = result[col].map(lambda ok: "✅" if ok else "❌")
    return result


def _pass_style(value: str) -> str:
    if value == "✅":
        return f"color: {TABLE_CONFIG['pass_color']}; font-weight: bold"
    if value == "❌":
        return f"color: {TABLE_CONFIG['fail_color']}; font-weight: bold"
    return ""


def display_table(df: pd.DataFrame, key: str = "report", show_title: bool = False) -> None:
    """
    显示检查行表格，支持按检查 id 过滤、只看失败行

    Args:
        df: report_dataframe 的结果
        key: 控件键前缀，区分同页多个表格
        show_title: 是否显示标题
    """
    if df.empty:
        st.warning("报告中没有检查行。")
        return

    if show_title:
        st.markdown("### 📋 检查结果")

    col1, col2 = st.columns([3, 1])
    with col1:
        ids = ["全部"] + sorted(df["id"].unique().tolist())
        selected = st.selectbox("检查项", ids, key=f"{key}_id")
    with col2:
        only_failed = st.checkbox("只看未通过", key=f"{key}_failed")

    view = df if selected == "全部" else df[df["id"] == selected]
    if only_failed:
        view = view[~view["pass"].astype(bool)]
    view = view.dropna(axis=1, how="all")

    formatted = format_dataframe(view)
    styled = formatted.style.map(_pass_style, subset=["pass"]) if "pass" in formatted.columns else formatted
    st.dataframe(styled, height=TABLE_CONFIG["height"], use_container_width=True, hide_index=True)


def display_statistics(df: pd.DataFrame) -> None:
    """显示通过率统计"""
    if df.empty:
        return
    total = len(df)
    passed = int(df["pass"].astype(bool).sum())
    col1, col2, col3, col4 = st.columns(4)
    with col1:
        st.metric("检查总数", total)
    with col2:
        st.metric("通过", passed)
    with col3:
        st.metric("未通过", total - passed)
    with col4:
        ratios = pd.to_numeric(df["ratio"], errors="coerce")
        st.metric("最大比值", format_number(ratios.max()) if ratios.notna().any() else "---")

    by_id = df.groupby("id")["pass"].agg(["count", "sum"]).rename(columns={"count": "检查数", "sum": "通过数"})
    st.dataframe(by_id, use_container_width=True)


def _numeric_abs(series: pd.Series) -> pd.Series:
    def to_abs(value):
        if isinstance(value, dict) and set(value) == {"re", "im"}:
            return abs(complex(value["re"], value["im"]))
        try:
            return abs(value)
        except TypeError:
            return np.nan
    return series.map(to_abs).astype(float)


def plot_report(suite: str, df: pd.DataFrame) -> Optional[Any]:
    """
    按套件绘制对应图表，没有合适图表时返回 None

    geometric-sum: 逐 c 贡献与包络；rs-scan: 部分和的对数-对数曲线；
    hankel-decay: |W̃| 随 y 的变化。
    """
    if suite == "geometric-sum":
        data = df[df["id"] == "geometric_contribution"].copy()
        if data.empty:
            return None
        data["|contribution|"] = _numeric_abs(data["value"])
        data["envelope"] = pd.to_numeric(data["bound"], errors="coerce")
        long = data.melt(id_vars=["norm"], value_vars=["|contribution|", "envelope"], var_name="量", value_name="值")
        fig = px.scatter(long, x="norm", y="值", color="量", log_x=True, log_y=True, title="逐 c 贡献与包络")
        return fig
    if suite == "rs-scan":
        data = df[df["id"] == "rs_partial_sum"].copy()
        if data.empty:
            return None
        data["sum"] = pd.to_numeric(data["value"], errors="coerce")
        return px.line(data, x="X", y="sum", color=data["seed"].astype(str), markers=True, log_x=True, log_y=True,
                       title="Σ|A(n,1)|² 的增长")
    if suite == "hankel-decay":
        data = df[df["id"] == "w_tilde"].copy()
        if data.empty:
            return None
        data["|W̃|"] = _numeric_abs(data["value"])
        return px.scatter(data, x="y", y="|W̃|", color="regime", log_x=True, log_y=True, title="|W̃| 的衰减")
    return None
