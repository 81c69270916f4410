import hashlib
import json
from dataclasses import asdict

from network_model.models import NetworkConfig


def hash_payload(payload: dict) -> str:
    """
    Hash structured parameters, not their textual source.
    Same meaning => same hash.
    """
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def hash_config(cfg: NetworkConfig) -> str:
    return hash_payload(asdict(cfg))
