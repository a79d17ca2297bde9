"""Logging functionality for orbitlab."""
import json
import logging
import time
from typing import Any, Dict, Optional

import requests

from orbitlab.reports import to_jsonable

logger = logging.getLogger(__name__)


class ReportCollector:
    """Ships finished reports to an HTTP collector endpoint."""

    def __init__(self, endpoint_url: Optional[str], timeout: float = 10.0):
        """Initialize with the collector URL."""
        self.endpoint_url = endpoint_url
        self.timeout = timeout

    def post_report(self, command: str, report: Dict[str, Any]) -> bool:
        """
        Post a report to the collector.

        Returns True if the collector accepted it, False otherwise.
        """
        if not self.endpoint_url:
            logger.warning("Report endpoint URL not configured, skipping upload")
            return False

        try:
            payload = {"command": command, "report": report, "timestamp": int(time.time())}
            response = requests.post(
                self.endpoint_url,
                data=json.dumps(payload, sort_keys=True, default=to_jsonable),
                headers={"Content-Type": "application/json"},
                timeout=self.timeout,
            )

            if response.status_code < 200 or response.status_code >= 300:
                logger.error(f"Report collector returned error: {response.status_code} {response.text}")
                return False

            return True

        except requests.RequestException as e:
            logger.error(f"Error sending report to collector: {str(e)}")
            return False


def configure_logging(log_level: str = "INFO") -> None:
    """Configure the Python logging."""
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    # Configure the root logger
    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )
