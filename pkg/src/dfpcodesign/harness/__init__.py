"""Vector generation, benchmarking, verification and reporting."""

from .bench import (
    SOFTWARE_ONLY_KNOBS,
    BenchmarkResult,
    CalibrationResult,
    Mismatch,
    ReportRow,
    VectorRecord,
    calibrate,
    run_benchmark,
    verify,
)
from .oracle import oracle_multiply, oracle_multiply_bits
from .report import emit_report, fixed, render_csv, render_json
from .vectors import (
    CATEGORIES,
    GenerationError,
    GeneratorConfig,
    TestVector,
    VectorFileError,
    belongs,
    classify,
    generate_vectors,
    read_vectors,
    standard_vectors,
    write_vectors,
)

__all__ = [
    "CATEGORIES", "SOFTWARE_ONLY_KNOBS", "BenchmarkResult", "CalibrationResult", "GenerationError",
    "GeneratorConfig", "Mismatch", "ReportRow", "TestVector", "VectorFileError", "VectorRecord",
    "belongs", "calibrate", "classify", "emit_report", "fixed", "generate_vectors",
    "oracle_multiply", "oracle_multiply_bits", "read_vectors", "render_csv", "render_json",
    "run_benchmark", "standard_vectors", "verify", "write_vectors",
]
