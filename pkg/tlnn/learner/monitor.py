#!/usr/bin/env python3
"""
Report-by-exception tracking of the training state.
"""

import logging
from datetime import datetime
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


class ConvergenceMonitor:
    """Convergence monitor

    Counts consecutive error-free epochs; the network counts as converged
    once the count reaches ``patience``. A message is produced only when
    that state changes.
    """

    def __init__(self, network_name: str, patience: Optional[int] = None):
        self.network_name = network_name
        self.patience = patience
        self.clean_epochs = 0
        self.last_state = False

    @property
    def converged(self) -> bool:
        return self.last_state

    def process_epoch(self, error_free: bool) -> Optional[Dict[str, Any]]:
        """
        Process one epoch result:
        - Increment counter after an error-free epoch
        - Reset on any misclassification
        - Converged only if count >= patience (never without patience)
        """
        if error_free:
            self.clean_epochs += 1
        else:
            self.clean_epochs = 0

        current_state = self.patience is not None and self.clean_epochs >= self.patience

        # Report by exception - only report if state changed
        if current_state != self.last_state:
            self.last_state = current_state
            return self._create_state_message(current_state)

        return None

    def _create_state_message(self, converged: bool) -> Dict[str, Any]:
        timestamp = datetime.now().isoformat()

        if converged:
            topic = f"{self.network_name} Training CONVERGED"
            message = (f"{self.network_name} classified every sample for {self.clean_epochs} "
                       f"consecutive epochs at {timestamp}")
        else:
            topic = f"{self.network_name} Training Regressed"
            message = f"{self.network_name} misclassified samples again at {timestamp}"

        return {
            "topic": topic,
            "message": message,
            "timestamp": timestamp,
            "converged": converged
        }
