import os
import json
from typing import Any, Dict, List, Mapping, Optional, Union

import pandas as pd

import src
import src.utils.config as config
from src.utils.logger import get_logger

TableData = Union[pd.DataFrame, Mapping[str, List[Any]]]


class ResultStorage:
    """Writes result tables and the run metadata sidecar to a local directory."""

    def __init__(self, out_dir: Optional[str] = None, format: str = config.DEFAULT_FORMAT):
        """
        Initialize result storage.

        Args:
            out_dir: Output directory (default: from config)
            format: Table format, 'csv' or 'json'
        """
        if format not in config.OUTPUT_FORMATS:
            raise ValueError(f"Unsupported format: {format}")
        self.out_dir = out_dir or config.OUTPUT_DIR
        self.format = format
        self.logger = get_logger("storage")
        os.makedirs(self.out_dir, exist_ok=True)

    def _generate_path(self, name: str, format: Optional[str] = None) -> str:
        """
        Path of a result file.

        Args:
            name: Table name without extension
            format: Extension; defaults to the storage format

        Returns:
            str: Path inside the output directory
        """
        return os.path.join(self.out_dir, f"{name}.{format or self.format}")

    def store_table(self, name: str, data: TableData, format: Optional[str] = None) -> str:
        """
        Store a table of results.

        Args:
            name: Table name (e.g. 'moments')
            data: DataFrame or mapping of column name to values
            format: 'csv' or 'json' (default: storage format)

        Returns:
            str: Path where the table was stored
        """
        format = format or self.format
        df = data if isinstance(data, pd.DataFrame) else pd.DataFrame(dict(data))
        path = self._generate_path(name, format)

        if format == 'csv':
            df.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT)
        elif format == 'json':
            # Python float repr round-trips doubles
            columns = {column: df[column].tolist() for column in df.columns}
            with open(path, 'w') as f:
                json.dump(columns, f, indent=2)
                f.write("\n")
        else:
            raise ValueError(f"Unsupported format: {format}")

        self.logger.info(f"Stored {len(df)} rows at {path}")
        return path

    def store_metadata(self, command: str, run_config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> str:
        """
        Write the run metadata sidecar.

        Holds no timestamps, so identical runs produce identical files.

        Args:
            command: Subcommand that produced the results
            run_config: Echo of the run configuration
            extra: Additional result summary fields

        Returns:
            str: Path of the sidecar
        """
        metadata = {
            "tool": "qwalk",
            "version": src.__version__,
            "command": command,
            "config": run_config,
        }
        if extra:
            metadata["results"] = extra

        path = os.path.join(self.out_dir, config.METADATA_FILENAME)
        with open(path, 'w') as f:
            json.dump(metadata, f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    def check_file_exists(self, name: str, format: Optional[str] = None) -> bool:
        return os.path.exists(self._generate_path(name, format))

    def list_files(self) -> List[str]:
        """
        List result files in the output directory.

        Returns:
            List[str]: Sorted file names
        """
        return sorted(
            entry for entry in os.listdir(self.out_dir)
            if os.path.isfile(os.path.join(self.out_dir, entry))
        )

    def load_data(self, name: str, format: Optional[str] = None) -> pd.DataFrame:
        """
        Load a stored table.

        Args:
            name: Table name without extension
            format: 'csv' or 'json' (default: storage format)

        Returns:
            pd.DataFrame: The stored table
        """
        format = format or self.format
        path = self._generate_path(name, format)
        if format == 'csv':
            return pd.read_csv(path, float_precision="round_trip")
        with open(path, 'r') as f:
            return pd.DataFrame(json.load(f))
