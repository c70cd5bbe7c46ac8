"""
静态分析框架主入口
"""
import sys
from pathlib import Path

# 添加项目根目录到Python路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.interfaces.analyzer_cli import AnalyzerCLI


def main():
    """
    主函数 - 分析器入口

    提供以下功能:
    1. 解析 mini-IR 程序
    2. 按注册表解析依赖、生成执行计划
    3. 运行方法级 / 类级 / 程序级分析
    4. 输出 CFG、数据流、指针分析与污点报告
    """
    try:
        code = AnalyzerCLI().run()
    except KeyboardInterrupt:
        print("\n用户中断执行")
        code = 130
    sys.exit(code)


if __name__ == "__main__":
    main()
