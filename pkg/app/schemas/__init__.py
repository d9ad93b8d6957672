from .matrix_file import MatrixFile
from .reports import CheckResult, CounterexampleRecord, PDReport, RunReport, SuiteResult, Verdict
