"""Exception types raised across the package."""


class TreescribeError(Exception):
    """Base class for all errors raised by this package."""


# --- chart spec parsing ---

class SpecError(TreescribeError):
    """The chart spec document is malformed or inconsistent."""


class MalformedSpec(SpecError):
    pass


class UnknownChannel(SpecError):
    pass


class DuplicateChannel(SpecError):
    pass


class MissingChannel(SpecError):
    pass


# --- data loading ---

class DataError(TreescribeError):
    """The dataset source cannot be loaded."""


class EmptySource(DataError):
    pass


class RaggedRows(DataError):
    pass


class EmptyCell(DataError):
    pass


class MixedTypes(DataError):
    def __init__(self, field: str):
        super().__init__(f"column {field!r} mixes numeric/temporal and plain text values")
        self.field = field


# --- validation ---

class ValidationError(TreescribeError):
    """Spec and dataset are individually well formed but inconsistent."""


class FieldNotFound(ValidationError):
    def __init__(self, field: str):
        super().__init__(f"field {field!r} not present in the dataset")
        self.field = field


class KindMismatch(ValidationError):
    pass


# --- settings / presets ---

class SettingsError(TreescribeError):
    """A persistent-settings operation failed; state is unchanged."""


class DuplicateName(SettingsError):
    pass


class EmptyName(SettingsError):
    pass


class UnknownToken(SettingsError):
    pass


class UnknownPreset(SettingsError):
    pass


class VersionMismatch(SettingsError):
    pass


class MalformedDocument(SettingsError):
    pass


# --- session ---

class InapplicableToken(TreescribeError):
    """The requested token kind does not exist at the cursor's level."""


class ScriptParseError(TreescribeError):
    def __init__(self, line_no: int, line: str):
        super().__init__(f"line {line_no}: cannot parse {line!r}")
        self.line_no = line_no
        self.line = line
