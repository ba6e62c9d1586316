"""Consumption notifications: file outbox first, optional SMTP second.

The append to the outbox file is the source of truth. SMTP delivery, when
configured, is attempted only after a successful append, and a delivery
failure is logged rather than raised.
"""

import logging
import smtplib
import threading
from dataclasses import asdict, dataclass
from email.message import EmailMessage
from pathlib import Path

from .config import SmtpSettings
from .jsonl import append_record, replay

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NotificationRecord:
    to: str
    subject: str
    body: str
    created_at: str  # ISO instant


class Outbox:
    """Append-only notification store with optional SMTP relay."""

    def __init__(self, path: Path | None = None, smtp: SmtpSettings | None = None):
        self._path = path
        self._smtp = smtp
        self._lock = threading.Lock()
        self._records: list[NotificationRecord] = []
        if path is not None:
            self._records = [NotificationRecord(**raw) for raw in replay(path)]

    def __len__(self) -> int:
        return len(self._records)

    def all(self) -> list[NotificationRecord]:
        return list(self._records)

    def send(self, record: NotificationRecord) -> NotificationRecord:
        """Append durably, then try SMTP if configured.

        Raises:
            StorageFailure: the outbox file cannot be appended
        """
        with self._lock:
            if self._path is not None:
                append_record(self._path, asdict(record))
            self._records.append(record)
        if self._smtp is not None:
            try:
                self._deliver(record)
            except (OSError, smtplib.SMTPException) as exc:
                logger.warning("SMTP delivery to %s failed: %s", record.to, exc)
        return record

    def _deliver(self, record: NotificationRecord) -> None:
        message = EmailMessage()
        message["From"] = self._smtp.sender
        message["To"] = record.to
        message["Subject"] = record.subject
        message.set_content(record.body)
        with smtplib.SMTP(self._smtp.host, self._smtp.port, timeout=10) as client:
            client.send_message(message)
