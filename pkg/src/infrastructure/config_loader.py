"""
配置加载器
负责加载和管理运行设置（settings.yaml）
"""
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger

from ..domain.errors import ConfigError

DEFAULT_SETTINGS: Dict[str, Any] = {
    "registry": "config/analyses.yaml",
    "output_dir": "output",
    "log_level": "INFO",
    "log_file": None,
    "dataflow_iteration_factor": 10000,
    "pta_max_worklist_ops": 5_000_000,
    "hybrid_threshold": 8,
    "workers": 1,
}


class ConfigLoader:
    """配置加载器类"""

    def __init__(self, config_dir: str = "config", settings_file: Optional[str] = None):
        """
        初始化配置加载器

        Args:
            config_dir: 配置文件目录路径
            settings_file: 显式指定的设置文件；指定后文件必须存在
        """
        self.config_dir = Path(config_dir)
        self.settings_file = Path(settings_file) if settings_file else None
        self._settings: Optional[Dict[str, Any]] = None

    def load_settings(self) -> Dict[str, Any]:
        """
        加载主配置文件，缺失的键取默认值

        Returns:
            配置字典

        Raises:
            ConfigError: 显式指定的文件不存在，或内容不是 YAML 映射
        """
        if self._settings is None:
            settings_file = self.settings_file or self.config_dir / "settings.yaml"
            loaded: Dict[str, Any] = {}
            if settings_file.exists():
                try:
                    with open(settings_file, "r", encoding="utf-8") as f:
                        loaded = yaml.safe_load(f) or {}
                except yaml.YAMLError as e:
                    raise ConfigError(f"设置文件格式错误 {settings_file}: {e}") from e
                if not isinstance(loaded, dict):
                    raise ConfigError(f"设置文件必须是 YAML 映射: {settings_file}")
            elif self.settings_file is not None:
                raise ConfigError(f"配置文件不存在: {settings_file}")
            else:
                logger.debug("未找到 {}，使用默认设置", settings_file)
            self._settings = {**DEFAULT_SETTINGS, **loaded}

        return self._settings

    def get_analyzer_config(self) -> Dict[str, Any]:
        """
        获取分析器运行配置

        Returns:
            合并默认值后的配置字典
        """
        return dict(self.load_settings())

    def get_registry_path(self) -> Path:
        return Path(self.load_settings()["registry"])

    def get_output_path(self, override: Optional[str] = None) -> Path:
        """
        获取结果输出目录，不存在时创建

        Returns:
            输出目录路径
        """
        output_dir = Path(override or self.load_settings()["output_dir"])
        output_dir.mkdir(parents=True, exist_ok=True)
        return output_dir

    def validate_config(self) -> bool:
        """
        验证配置取值范围

        Returns:
            配置是否有效
        """
        try:
            settings = self.load_settings()
        except ConfigError as e:
            logger.error("配置验证失败: {}", e)
            return False

        positive_fields = ["dataflow_iteration_factor", "pta_max_worklist_ops", "hybrid_threshold", "workers"]
        for name in positive_fields:
            value = settings.get(name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                logger.error("配置项 {} 必须是正整数，实际为 {!r}", name, value)
                return False
        return True

    def create_default_config(self) -> Path:
        """
        创建默认配置文件
        """
        config_file = self.settings_file or self.config_dir / "settings.yaml"
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, "w", encoding="utf-8") as f:
            yaml.dump(DEFAULT_SETTINGS, f, default_flow_style=False, allow_unicode=True, sort_keys=False)

        logger.info("默认配置文件已创建: {}", config_file)
        return config_file
