"""Server-side profile store with opaque monotonically assigned ids.

Persistence is an event log: one JSON line per put or delete, replayed at
startup. Ids are never reused, even after a delete, so log entries keep
pointing at the profile that made them.
"""

import re
import threading
from dataclasses import asdict
from pathlib import Path

from .energy import Activity, Gender, UserProfile
from .errors import NoSuchUser, ValidationError
from .jsonl import append_record, replay

_ID_SHAPE = re.compile(r"^u(\d+)$")


def parse_gender(text: str) -> Gender:
    try:
        return Gender(text)
    except ValueError as exc:
        raise ValidationError(f"gender must be one of {[g.value for g in Gender]}, got {text!r}") from exc


def parse_activity(text: str) -> Activity:
    try:
        return Activity(text)
    except ValueError as exc:
        raise ValidationError(
            f"activity must be one of {[a.value for a in Activity]}, got {text!r}"
        ) from exc


def _to_event_dict(profile: UserProfile) -> dict:
    raw = asdict(profile)
    raw["gender"] = profile.gender.value
    raw["activity"] = profile.activity.value
    return raw


def _from_event_dict(raw: dict) -> UserProfile:
    return UserProfile(
        id=raw["id"],
        name=raw["name"],
        gender=Gender(raw["gender"]),
        age=int(raw["age"]),
        height_cm=int(raw["height_cm"]),
        weight_kg=raw["weight_kg"],
        activity=Activity(raw["activity"]),
        email=raw["email"],
    )


class ProfileStore:
    """CRUD over UserProfile records, one writer at a time."""

    def __init__(self, path: Path | None = None):
        self._path = path
        self._lock = threading.Lock()
        self._profiles: dict[str, UserProfile] = {}
        self._last_id = 0
        if path is not None:
            for event in replay(path):
                self._apply(event)

    def _apply(self, event: dict) -> None:
        if event.get("op") == "put":
            profile = _from_event_dict(event["profile"])
            self._profiles[profile.id] = profile
            self._bump(profile.id)
        elif event.get("op") == "delete":
            self._profiles.pop(event["user_id"], None)
            self._bump(event["user_id"])

    def _bump(self, user_id: str) -> None:
        match = _ID_SHAPE.match(user_id)
        if match:
            self._last_id = max(self._last_id, int(match.group(1)))

    def __len__(self) -> int:
        return len(self._profiles)

    def _persist(self, event: dict) -> None:
        if self._path is not None:
            append_record(self._path, event)

    def create(
        self,
        *,
        name: str,
        gender: Gender,
        age: int,
        height_cm: int,
        weight_kg: float,
        activity: Activity,
        email: str,
    ) -> UserProfile:
        """Validate, assign the next id, persist, return the new profile.

        Raises:
            ValidationError, StorageFailure
        """
        with self._lock:
            profile = UserProfile(
                id=f"u{self._last_id + 1}",
                name=name,
                gender=gender,
                age=age,
                height_cm=height_cm,
                weight_kg=weight_kg,
                activity=activity,
                email=email,
            ).validate()
            self._persist({"op": "put", "profile": _to_event_dict(profile)})
            self._profiles[profile.id] = profile
            self._last_id += 1
        return profile

    def update(
        self,
        user_id: str,
        *,
        name: str,
        gender: Gender,
        age: int,
        height_cm: int,
        weight_kg: float,
        activity: Activity,
        email: str,
    ) -> UserProfile:
        """Replace every field of an existing profile.

        Raises:
            NoSuchUser, ValidationError, StorageFailure
        """
        with self._lock:
            if user_id not in self._profiles:
                raise NoSuchUser(f"no profile with id {user_id!r}")
            profile = UserProfile(
                id=user_id,
                name=name,
                gender=gender,
                age=age,
                height_cm=height_cm,
                weight_kg=weight_kg,
                activity=activity,
                email=email,
            ).validate()
            self._persist({"op": "put", "profile": _to_event_dict(profile)})
            self._profiles[user_id] = profile
        return profile

    def delete(self, user_id: str) -> None:
        """Raises NoSuchUser if absent, StorageFailure if unwritable."""
        with self._lock:
            if user_id not in self._profiles:
                raise NoSuchUser(f"no profile with id {user_id!r}")
            self._persist({"op": "delete", "user_id": user_id})
            del self._profiles[user_id]

    def get(self, user_id: str) -> UserProfile:
        try:
            return self._profiles[user_id]
        except KeyError:
            raise NoSuchUser(f"no profile with id {user_id!r}") from None

    def list(self) -> list[UserProfile]:
        """Profiles in creation order (numeric id order)."""

        def key(profile: UserProfile):
            match = _ID_SHAPE.match(profile.id)
            return (0, int(match.group(1))) if match else (1, profile.id)

        return sorted(self._profiles.values(), key=key)
