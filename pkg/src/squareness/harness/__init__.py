from .conj25 import Report, ReportRow, RankPositiveTwist, SkipRow, scan_conjecture, table1, verify_conj25
from .db import CurveRecord, ParseError, ValidationError, find, parse_db, validate
from .report import emit, read_csv
from .squareness import SquarenessVerdict, ZeroLValue, rank_zero_factors, squareness_check
from .star import ParityFinding, StarRow, first_odd_sha_conductor, parity_findings, scan_hypothesis_star

__all__ = [
    "CurveRecord", "ParityFinding", "ParseError", "RankPositiveTwist", "Report", "ReportRow", "SkipRow",
    "SquarenessVerdict", "StarRow", "ValidationError", "ZeroLValue", "emit", "find", "first_odd_sha_conductor",
    "parity_findings", "parse_db", "rank_zero_factors", "read_csv", "scan_conjecture", "scan_hypothesis_star",
    "squareness_check", "table1", "validate", "verify_conj25",
]
