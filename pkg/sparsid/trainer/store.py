"""Model and checkpoint persistence, history logs."""

import logging
from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd
from pydantic import ValidationError

from utils import atomic_write_text
from sparsid.errors import DataError
from sparsid.mlp_core import network_from_document, network_to_document
from sparsid.sparse_bayes import HyperDocument
from . import config
from .models import IterationRecord, ModelDocument, TrainConfig, TrainedModel

logger = logging.getLogger(__name__)


def model_to_document(model: TrainedModel) -> ModelDocument:
    return ModelDocument(
        config=model.config.snapshot(),
        network=network_to_document(model.net),
        hyper=HyperDocument.from_state(model.hyper),
        norm=model.norm,
        history=list(model.history),
        rng_state=model.rng_state,
    )


def model_from_document(doc: ModelDocument) -> TrainedModel:
    return TrainedModel(
        net=network_from_document(doc.network),
        hyper=doc.hyper.to_state(),
        history=tuple(doc.history),
        norm=doc.norm,
        config=TrainConfig.model_validate(doc.config),
        rng_state=doc.rng_state,
    )


def save_model(path: Union[str, Path], model: TrainedModel) -> Path:
    """Write the model (or a checkpoint) as one JSON document, atomically."""
    path = atomic_write_text(path, model_to_document(model).model_dump_json(indent=2))
    logger.debug(f"✓ Saved model at iteration {model.iteration}: {path}")
    return path


def load_model(path: Union[str, Path]) -> TrainedModel:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    try:
        doc = ModelDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise DataError(f"{path} is not a valid model document: {e.errors()[0]['msg']}") from e
    return model_from_document(doc)


def latest_checkpoint(directory: Union[str, Path]) -> Optional[Path]:
    """Highest-numbered checkpoint in ``directory``, if any."""
    found = sorted(Path(directory).glob(config.CHECKPOINT_PATTERN.replace("{iteration:04d}", "*")))
    return found[-1] if found else None


def write_history(path: Union[str, Path], history: Iterable[IterationRecord]) -> Path:
    rows = [record.model_dump(exclude={"layers"}) for record in history]
    return atomic_write_text(path, pd.DataFrame(rows, columns=[f for f in IterationRecord.model_fields if f != "layers"]).to_csv(index=False))


def write_hyper_log(path: Union[str, Path], history: Iterable[IterationRecord]) -> Path:
    """Per-iteration, per-layer cost terms and active counts."""
    rows = [{"iter": record.iteration, **layer.model_dump()} for record in history for layer in record.layers]
    columns = ["iter", "layer", "cost_total", "data_term", "reg_term", "logdet_upsilon", "logdet_Hinv", "active_weights"]
    return atomic_write_text(path, pd.DataFrame(rows, columns=columns).to_csv(index=False))
