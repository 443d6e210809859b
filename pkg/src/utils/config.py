"""环境变量配置读取

所有开关都来自环境变量（main.py 启动时由 python-dotenv 加载 .env），
非法值回退到默认值并给出警告。
"""
import os

from .logger import logger

DEFAULT_SEED = 0
DEFAULT_MAX_RETRIES = 32
DEFAULT_STRATEGY = "auto"


def get_int_env(name, default):
    """读取整数环境变量"""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"无效的 {name} 配置: {raw}，使用默认值: {default}")
        return default


def get_float_env(name, default=None):
    """读取浮点环境变量，未设置时返回 default"""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"无效的 {name} 配置: {raw}，使用默认值: {default}")
        return default


def default_seed():
    return get_int_env("SYZ_SEED", DEFAULT_SEED)


def max_retries():
    retries = get_int_env("SYZ_MAX_RETRIES", DEFAULT_MAX_RETRIES)
    if retries < 1:
        logger.warning(f"SYZ_MAX_RETRIES 必须为正数，使用默认值: {DEFAULT_MAX_RETRIES}")
        return DEFAULT_MAX_RETRIES
    return retries


def default_strategy():
    return os.getenv("SYZ_STRATEGY", DEFAULT_STRATEGY).lower()


def run_timeout():
    """basis / demo 命令的超时时间（秒），未设置时为 None"""
    return get_float_env("SYZ_TIMEOUT")
