"""
JSON checkpoints: a config header, float64 tensors as base64 little-endian
blobs, and a SHA-256 over the canonical JSON of everything else.
"""
import base64
import csv
import hashlib
import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import torch

from policy.exceptions import CorruptCheckpoint
from policy.network import DTYPE, NetConfig, VectorFieldNet
from policy.normalization import ActionScaler

__all__ = ("load_checkpoint", "read_loss_curve", "save_checkpoint", "write_loss_curve")

FORMAT = "forge-checkpoint/1"


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _encode(tensor: torch.Tensor) -> dict:
    array = tensor.detach().to(DTYPE).contiguous().numpy().astype("<f8")
    return {"shape": list(array.shape), "data": base64.b64encode(array.tobytes()).decode("ascii")}


def _decode(blob: dict) -> torch.Tensor:
    array = np.frombuffer(base64.b64decode(blob["data"]), dtype="<f8").reshape(blob["shape"])
    return torch.from_numpy(array.copy())


def save_checkpoint(
    path: Union[str, Path],
    net: VectorFieldNet,
    scaler: ActionScaler,
    header: Optional[dict] = None,
) -> Path:
    payload = {
        "format": FORMAT,
        "net": net.cfg.to_json(),
        "scaler": scaler.to_json(),
        "header": header or {},
        "tensors": {name: _encode(t) for name, t in net.state_dict().items()},
    }
    payload["sha256"] = hashlib.sha256(_canonical(payload)).hexdigest()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[VectorFieldNet, ActionScaler, dict]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptCheckpoint(f"{path} is not JSON: {exc}")
    if payload.get("format") != FORMAT:
        raise CorruptCheckpoint(f"{path} is not a {FORMAT} file")
    expected = payload.pop("sha256", None)
    if hashlib.sha256(_canonical(payload)).hexdigest() != expected:
        raise CorruptCheckpoint(f"Content hash mismatch in {path}")
    net = VectorFieldNet(NetConfig(**payload["net"]))
    net.load_state_dict({name: _decode(blob) for name, blob in payload["tensors"].items()})
    net.eval()
    return net, ActionScaler.from_json(payload["scaler"]), payload["header"]


def write_loss_curve(path: Union[str, Path], losses: List[float]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["step", "loss"])
        for step, loss in enumerate(losses, start=1):
            writer.writerow([step, repr(float(loss))])
    return path


def read_loss_curve(path: Union[str, Path]) -> List[float]:
    with Path(path).open(newline="", encoding="utf-8") as handle:
        return [float(row["loss"]) for row in csv.DictReader(handle)]
