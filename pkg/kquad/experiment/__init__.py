from .artifacts import read_rows_csv, write_plotdata, write_rows_csv, write_study_outputs, write_summary
from .config import DEFAULT_N_GRID, get_config, load_config, validate_config
from .fit import RateFit, fit_rate
from .runner import ROW_FIELDS, RowStatus, StudyRow, run_study
from .summary import SummaryEntry, render_summary, summarize
