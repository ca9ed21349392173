import logging

logger_nn = logging.getLogger("nn")
logger_env = logging.getLogger("env")
logger_agent = logging.getLogger("agent")
logger_harness = logging.getLogger("harness")
