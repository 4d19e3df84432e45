import json
import os
import sys
from datetime import datetime

import streamlit as st

# 确保可以导入模块
sys.path.append(os.path.abspath(os.path.dirname(__file__)))

from modules.cli import ExperimentReport, emit, load_report
from modules.config import APP_ICON, APP_TITLE, APP_VERSION, REPORT_PATH, RUN_DEFAULTS, SUITE_MAPPING
from modules.errors import ZiVerifyError
from modules.suites import SuiteFactory, SuiteManager
from modules.ui_utils import display_statistics, display_table, plot_report, report_dataframe
from modules.utils import to_serializable

st.set_page_config(
    page_title=APP_TITLE,
    page_icon=APP_ICON,
    layout="wide",
    initial_sidebar_state="expanded",
    menu_items={
        'Get Help': None,
        'Report a bug': None,
        'About': f"{APP_TITLE} v{APP_VERSION}"
    }
)

# 隐藏默认菜单和部署按钮
hide_menu_style = """
    <style>
    #MainMenu {visibility: hidden;}
    footer {visibility: hidden;}
    .stDeployButton {display: none;}
    .block-container {
        padding-top: 1rem;
        padding-bottom: 0rem;
        max-width: 100% !important;
    }
    .stDownloadButton button {
        padding: 0.25rem 1rem !important;
    }
    </style>
"""
st.markdown(hide_menu_style, unsafe_allow_html=True)


@st.cache_resource
def get_manager() -> SuiteManager:
    return SuiteManager()


def show_report(report: ExperimentReport, key: str) -> None:
    """统计、图表、检查表与下载按钮"""
    df = report_dataframe(report.rows)
    status = "✅ 全部通过" if report.passed else f"❌ {report.failed_count} 项未通过"
    st.markdown(f"#### {SUITE_MAPPING.get(report.suite, report.suite)}：{status}")
    st.caption(f"种子 {report.stamp.get('seed')} · 线程 {report.stamp.get('threads')} · "
               f"用时 {report.wall_time:.1f}s")
    display_statistics(df)

    fig = plot_report(report.suite, df)
    if fig is not None:
        st.plotly_chart(fig, use_container_width=True)

    if report.summary:
        with st.expander("📌 汇总量", expanded=False):
            st.json(to_serializable(report.summary))

    display_table(df, key=key, show_title=True)

    stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    col1, col2, _ = st.columns([1, 1, 3])
    with col1:
        st.download_button("📥 下载 JSON", emit(report, "json"), file_name=f"{report.suite}_{stamp}.json",
                           mime="application/json", key=f"{key}_json")
    with col2:
        st.download_button("📥 下载 CSV", emit(report, "csv").encode("utf-8-sig"),
                           file_name=f"{report.suite}_{stamp}.csv", mime="text/csv", key=f"{key}_csv")


if 'current_page' not in st.session_state:
    st.session_state.current_page = "🏠 首页"
if 'last_report' not in st.session_state:
    st.session_state.last_report = None

st.sidebar.markdown(f"## {APP_ICON} {APP_TITLE} v{APP_VERSION}")

page_options = ["🏠 首页", "🧪 运行套件", "📂 查看报告"]
page = st.sidebar.selectbox(
    "选择功能模块",
    page_options,
    index=page_options.index(st.session_state.current_page)
)
st.session_state.current_page = page

if st.session_state.current_page == "🏠 首页":
    st.title(f"{APP_ICON} {APP_TITLE}")
    st.markdown("---")
    st.markdown("""
    本工具对 ℚ(i) 上次凸性论证中每个可计算对象做数值或精确验证：

    - **高斯整数上的指数和**：Gauss 和、Kloosterman 和、Conrey–Iwaniec 特征和
    - **Voronoi 侧特征和管线**：T = e·V 分解、同余检测、双线性化
    - **GL3 系数**：Hecke 关系、Rankin–Selberg 增长
    - **Bessel 核**：GL2(ℂ) 核 𝐉_{μ,m}、谱权重、GL3 Hankel 变换的衰减
    - **驻相积分引擎**与迹公式几何侧和
    """)
    st.markdown("### 📋 验证套件")
    for name, display_name in SUITE_MAPPING.items():
        st.markdown(f"- `{name}`：{display_name}")
    st.info("命令行: `python verify.py <套件名> --out user_data/reports/<文件>.json`")

elif st.session_state.current_page == "🧪 运行套件":
    st.sidebar.markdown("### ⚙️ 运行设置")
    suite_name = st.sidebar.selectbox(
        "验证套件",
        SuiteFactory.get_all_suite_types(),
        format_func=lambda name: f"{name}（{SuiteFactory.get_display_name(name)}）"
    )
    seed = st.sidebar.number_input("随机种子", value=RUN_DEFAULTS["seed"], step=1)
    threads = st.sidebar.number_input("线程数", min_value=1, max_value=64, value=RUN_DEFAULTS["threads"])
    use_cache = st.sidebar.checkbox("使用缓存", True)

    defaults = SuiteFactory.SUITE_TYPES[suite_name]["class"].default_params()
    params_text = st.text_area("套件参数（JSON）", json.dumps(defaults, indent=2, ensure_ascii=False),
                               height=240, key=f"params_{suite_name}")

    if st.button("🚀 运行", type="primary"):
        try:
            params = json.loads(params_text)
            with st.spinner(f"正在运行 {suite_name}..."):
                suite = get_manager().run_suite(suite_name, params, seed=int(seed), threads=int(threads),
                                                use_cache=use_cache)
            st.session_state.last_report = ExperimentReport.from_suite(suite)
        except json.JSONDecodeError as e:
            st.error(f"参数不是合法 JSON: {e}")
        except ZiVerifyError as e:
            st.error(f"运行失败: {e}")

    report = st.session_state.last_report
    if report is not None:
        if st.button("💾 保存到报告目录"):
            path = os.path.join(REPORT_PATH, f"{report.suite}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json")
            emit(report, "json", path)
            st.success(f"已保存: {path}")
        show_report(report, key="run")

elif st.session_state.current_page == "📂 查看报告":
    files = sorted((f for f in os.listdir(REPORT_PATH) if f.endswith(".json")), reverse=True) \
        if os.path.exists(REPORT_PATH) else []
    if not files:
        st.info(f"报告目录 {REPORT_PATH} 中没有 JSON 报告。")
    else:
        file_name = st.sidebar.selectbox("报告文件", files)
        try:
            show_report(load_report(os.path.join(REPORT_PATH, file_name)), key="browse")
        except ZiVerifyError as e:
            st.error(f"无法读取报告: {e}")
