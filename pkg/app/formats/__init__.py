from .traces import parse_trace_file, write_trace_file
from .documents import (
    ExperimentDocument,
    ModelDocument,
    ProfileDocument,
    ReportDocument,
    ResponsesDocument,
    ThresholdsDocument,
    read_document,
    read_model,
    read_profile,
    render_document,
    write_document,
)

__all__ = [
    "parse_trace_file",
    "write_trace_file",
    "ExperimentDocument",
    "ModelDocument",
    "ProfileDocument",
    "ReportDocument",
    "ResponsesDocument",
    "ThresholdsDocument",
    "read_document",
    "read_model",
    "read_profile",
    "render_document",
    "write_document",
]
