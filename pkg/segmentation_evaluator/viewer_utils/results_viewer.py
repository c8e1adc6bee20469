"""A PySide6 window for browsing full evaluation results and their summary."""

import logging
import sys
from pathlib import Path

from PySide6.QtCore import QAbstractTableModel, QModelIndex, QSortFilterProxyModel, Qt
from PySide6.QtWidgets import (
    QApplication,
    QComboBox,
    QFileDialog,
    QFrame,
    QHBoxLayout,
    QLabel,
    QLineEdit,
    QPushButton,
    QSizePolicy,
    QSplitter,
    QTableView,
    QTextEdit,
    QVBoxLayout,
    QWidget,
)

from ..evaluation_utils import config_file
from ..evaluation_utils import report as rpt

logger = logging.getLogger(__name__)

FULL_COLUMNS = config_file.FULL_COLUMNS
SOURCE_COLUMN = config_file.SOURCE_COLUMN
GRID_CLR = "rgb(70,70,70)"


def table_data(rows: list[rpt.FullRow]) -> tuple[list[tuple[str, ...]], list[str]]:
    """Rows as CSV field tuples plus their column names."""
    with_source = any(row.source is not None for row in rows)
    column_names = FULL_COLUMNS + [SOURCE_COLUMN] if with_source else list(FULL_COLUMNS)
    data = []
    for row in rows:
        fields = rpt.full_row_fields(row)
        if with_source:
            fields.append(row.source or "")
        data.append(tuple(fields))
    return data, column_names


class ResultsTableModel(QAbstractTableModel):
    """A table model for displaying full evaluation results."""

    def __init__(self, data: list[tuple[str, ...]], column_names: list[str]) -> None:
        """Initializes the table model with result rows and column names.

        Args:
            data: List of tuples holding each row's CSV fields.
            column_names: Column names in field order.

        """
        super().__init__()
        self._data = data
        self._columns = column_names

    def rowCount(self, parent: QModelIndex | None = None) -> int:
        return len(self._data)

    def columnCount(self, parent: QModelIndex | None = None) -> int:
        return len(self._columns)

    def data(
        self,
        index: QModelIndex,
        role: Qt.ItemDataRole = Qt.DisplayRole,
    ) -> str | float | None:
        """Returns the data for a given index and role.

        Args:
            index: The model index specifying the row and column.
            role: DisplayRole for text, UserRole for the sort key.

        Returns:
            The field text for DisplayRole, a number (-inf for empty fields, lowercase
            text for non-numeric fields) for UserRole, or None for an invalid index or other role.

        """
        if not index.isValid():
            return None

        value = self._data[index.row()][index.column()]

        if role == Qt.DisplayRole:
            return value
        if role == Qt.UserRole:
            if not value:
                return float("-inf")  # empty cells sort first
            try:
                return float(value)
            except ValueError:
                return value.lower()
        return None

    def headerData(
        self,
        section: int,
        orientation: Qt.Orientation,
        role: Qt.ItemDataRole = Qt.DisplayRole,
    ) -> str | None:
        if role == Qt.DisplayRole:
            if orientation == Qt.Horizontal:
                return self._columns[section]
            if orientation == Qt.Vertical:
                return str(section + 1)
        return None


def format_row_details(row_data: dict[str, str]) -> str:
    """Format one result row as html table rows for the detail pane.

    Args:
        row_data: Column name to field text.

    Returns:
        Html table rows, one per column. Empty fields show as a dash.

    """
    html = ""
    for key, value in row_data.items():
        html += f"""<tr>
        <td style='font-size:10pt; font-weight:bold; text-align:right;
            border: 2px solid {GRID_CLR};'>{key}:</td>
        <td style='padding-left:3px; border: 2px solid {GRID_CLR};'>{value or "-"}</td>
        </tr>\n"""
    return html


def format_summary_bar(summary: rpt.SummaryReport) -> str:
    """One html line of summary metrics for the bottom bar."""
    html_parts = []
    fields = rpt.summary_fields(summary)
    for name, value in zip(config_file.SUMMARY_COLUMNS, fields, strict=True):
        html_parts.append(f"<b>{name}</b>: {value or '-'}&nbsp;&nbsp;")
    return "".join(html_parts)


class ResultsViewer(QWidget):
    """Spreadsheet of per-object results with a detail pane and a summary bar."""

    def __init__(self, rows: list[rpt.FullRow], summary: rpt.SummaryReport | None) -> None:
        super().__init__()
        self.rows = rows
        self.summary = summary

        self.setWindowTitle("Segmentation Evaluation Results")
        self.resize(1100, 500)

        main_layout = QVBoxLayout(self)

        # top toolbar with column search
        toolbar = QFrame()
        toolbar_layout = QHBoxLayout(toolbar)
        toolbar_layout.setContentsMargins(0, 0, 0, 0)
        self.column_filter = QComboBox()
        self.column_filter.setMaximumWidth(180)
        self.column_filter.currentIndexChanged.connect(
            lambda: self.filter_table(self.search_bar.text()),
        )
        self.search_bar = QLineEdit()
        self.search_bar.setPlaceholderText("Search results...")
        self.search_bar.textChanged.connect(self.filter_table)
        self.search_bar.setMaximumWidth(230)
        self.status_label = QLabel()
        self.status_label.setSizePolicy(QSizePolicy.Ignored, QSizePolicy.Preferred)
        toolbar_layout.addWidget(self.column_filter, 0)
        toolbar_layout.addWidget(self.search_bar, 1)
        toolbar_layout.addWidget(self.status_label, 1)
        toolbar.setFixedHeight(25)
        main_layout.addWidget(toolbar)

        # table on the left, selected row details on the right
        splitter = QSplitter(Qt.Horizontal)
        self.table = QTableView()
        splitter.addWidget(self.table)
        self.info_window = QTextEdit("Select a row...")
        self.info_window.setReadOnly(True)
        self.info_window.setLineWrapMode(QTextEdit.NoWrap)
        splitter.addWidget(self.info_window)
        splitter.setSizes([700, 300])
        main_layout.addWidget(splitter)

        # summary bar at the bottom
        summary_bar = QFrame()
        summary_bar.setFixedHeight(30)
        summary_bar_layout = QHBoxLayout(summary_bar)
        summary_bar_layout.setContentsMargins(0, 0, 0, 0)
        self.summary_label = QTextEdit()
        self.summary_label.setReadOnly(True)
        self.summary_label.setLineWrapMode(QTextEdit.NoWrap)
        self.summary_label.setVerticalScrollBarPolicy(Qt.ScrollBarAlwaysOff)
        self.output_csv_btn = QPushButton(" Output CSV ")
        self.output_csv_btn.clicked.connect(self.output_csv_file)
        summary_bar_layout.addWidget(self.output_csv_btn)
        summary_bar_layout.addWidget(self.summary_label)
        main_layout.addWidget(summary_bar)

        self.load_results()

    def load_results(self) -> None:
        """Fill the table, the column dropdown and the summary bar."""
        data, column_names = table_data(self.rows)
        source_model = ResultsTableModel(data, column_names)
        self.proxy_model = QSortFilterProxyModel()
        self.proxy_model.setSourceModel(source_model)
        self.proxy_model.setSortRole(Qt.UserRole)  # sort numbers as numbers

        self.table.setModel(self.proxy_model)
        self.table.setSortingEnabled(True)
        self.table.sortByColumn(0, Qt.AscendingOrder)
        self.table.selectionModel().selectionChanged.connect(self.update_info_window)

        self.column_filter.clear()
        for i, column_name in enumerate(column_names):
            self.column_filter.addItem(column_name, i)

        if self.summary is not None:
            self.summary_label.setHtml(format_summary_bar(self.summary))
        self.status_label.setText(f"Loaded {len(data)} results.")

    def update_info_window(self) -> None:
        """Show the selected row's fields vertically in the detail pane."""
        indexes = self.table.selectionModel().selectedIndexes()
        if not indexes:
            self.info_window.setText("Select a row...")
            return

        source_index = self.proxy_model.mapToSource(indexes[0])
        source_model = self.proxy_model.sourceModel()
        row_data = {
            source_model.headerData(i, Qt.Horizontal): source_model.data(
                source_model.index(source_index.row(), i), Qt.DisplayRole
            )
            for i in range(source_model.columnCount())
        }
        self.info_window.setHtml(f"<table>{format_row_details(row_data)}</table>")

    def filter_table(self, text: str) -> None:
        """Filter the table on the dropdown's column.

        Args:
            text: Input text from search bar.

        """
        self.proxy_model.setFilterCaseSensitivity(Qt.CaseInsensitive)
        self.proxy_model.setFilterWildcard(f"*{text}*")
        if self.column_filter.currentData() is not None:
            self.proxy_model.setFilterKeyColumn(self.column_filter.currentData())

        filtered_count = self.proxy_model.rowCount()
        total_count = self.proxy_model.sourceModel().rowCount()
        self.status_label.setText(f"Showing {filtered_count} of {total_count} results.")

    def output_csv_file(self) -> None:
        """Write the full and summary results next to a chosen full CSV path."""
        file_name, _ = QFileDialog.getSaveFileName(self, "Output CSV", "", "CSV files (*.csv)")
        if not file_name:
            return
        full_path = Path(file_name)
        rpt.write_full_csv(self.rows, full_path)
        if self.summary is not None:
            summary_path = full_path.with_name(f"{full_path.stem}_summary.csv")
            rpt.write_summary_csv(self.summary, summary_path)
        self.status_label.setText(f"Output CSV files... {full_path}")


def show_results(rows: list[rpt.FullRow], summary: rpt.SummaryReport | None) -> int:
    """Open the results window and run the Qt event loop until it is closed.

    Returns:
        The event loop's exit code.

    """
    app = QApplication.instance() or QApplication(sys.argv[:1])
    viewer = ResultsViewer(rows, summary)
    viewer.show()
    logger.info("Showing %d results in the viewer", len(rows))
    return app.exec()
