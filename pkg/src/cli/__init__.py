from .commands import build_parser, execute, main, run
from .instance_file import (
    InstanceFile,
    format_instance,
    load_instance,
    load_matrix,
    parse_instance,
    parse_matrix_text,
)
from .report import Report
