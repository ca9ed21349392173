class ConfigError(Exception): ...


class DimensionMismatch(ConfigError): ...


class VariantMismatch(ConfigError): ...
