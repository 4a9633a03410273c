"""Corpus manifest (JSON) and run configuration.

The manifest is one JSON file listing speakers and their utterances;
per-utterance texts may be inline (tiny fixtures) or path-referenced
(corpus layouts), with paths resolved relative to the manifest file.
All referenced config files are parsed up front so a bad cost matrix or
lexicon fails before any utterance is aligned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .alignment import DEFAULT_TIE_BREAK
from .costs import CostMatrix, load_cost_matrix
from .errors import ParseError, ValidationError
from .inventory import PhonemeInventory, load_inventory
from .lexicon import Lexicon, OovPolicy, load_lexicon


@dataclass
class Utterance:
    utterance_id: str
    prompt_text: str | None = None
    prompt_path: Path | None = None
    asr_transcript: str | None = None
    asr_path: Path | None = None
    annotation_path: Path | None = None

    def prompt(self) -> str:
        if self.prompt_text is not None:
            return self.prompt_text
        return self.prompt_path.read_text(encoding="utf-8")

    def asr(self) -> str:
        if self.asr_transcript is not None:
            return self.asr_transcript
        return self.asr_path.read_text(encoding="utf-8")


@dataclass
class Speaker:
    speaker_id: str
    l1_label: str | None = None
    utterances: list[Utterance] = field(default_factory=list)


@dataclass
class CorpusManifest:
    speakers: list[Speaker] = field(default_factory=list)

    @classmethod
    def from_json(cls, text: str, base_dir: Path | None = None,
                  source=None) -> "CorpusManifest":
        base = Path(base_dir) if base_dir is not None else Path(".")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad manifest JSON: {exc}", source=source) from None
        if not isinstance(doc, dict) or not isinstance(doc.get("speakers"), list):
            raise ParseError('manifest must be {"speakers": [...]}', source=source)

        manifest = cls()
        seen_speakers = set()
        for sdoc in doc["speakers"]:
            sid = sdoc.get("speaker_id")
            if not sid or not isinstance(sid, str):
                raise ParseError("speaker entry missing speaker_id", source=source)
            if sid in seen_speakers:
                raise ParseError(f"duplicate speaker_id {sid!r}", source=source)
            seen_speakers.add(sid)
            speaker = Speaker(sid, sdoc.get("l1_label"))
            seen_utts = set()
            for udoc in sdoc.get("utterances", []):
                uid = udoc.get("utterance_id")
                if not uid or not isinstance(uid, str):
                    raise ParseError(
                        f"utterance of {sid!r} missing utterance_id", source=source
                    )
                if uid in seen_utts:
                    raise ParseError(
                        f"duplicate utterance_id {uid!r} for speaker {sid!r}",
                        source=source,
                    )
                seen_utts.add(uid)
                utt = Utterance(uid)
                utt.prompt_text = udoc.get("prompt_text")
                if "prompt_path" in udoc:
                    utt.prompt_path = base / udoc["prompt_path"]
                utt.asr_transcript = udoc.get("asr_transcript")
                if "asr_path" in udoc:
                    utt.asr_path = base / udoc["asr_path"]
                if "annotation_path" in udoc:
                    utt.annotation_path = base / udoc["annotation_path"]
                if (utt.prompt_text is None) == (utt.prompt_path is None):
                    raise ParseError(
                        f"utterance {uid!r} needs exactly one of "
                        "prompt_text / prompt_path", source=source,
                    )
                if (utt.asr_transcript is None) == (utt.asr_path is None):
                    raise ParseError(
                        f"utterance {uid!r} needs exactly one of "
                        "asr_transcript / asr_path", source=source,
                    )
                speaker.utterances.append(utt)
            manifest.speakers.append(speaker)
        return manifest

    @classmethod
    def load(cls, path) -> "CorpusManifest":
        path = Path(path)
        return cls.from_json(
            path.read_text(encoding="utf-8"), path.parent, source=path
        )

    def validate_paths(self) -> None:
        for speaker in self.speakers:
            for utt in speaker.utterances:
                for p in (utt.prompt_path, utt.asr_path, utt.annotation_path):
                    if p is not None and not p.exists():
                        raise ValidationError(f"referenced path does not exist: {p}")

    def utterance_count(self) -> int:
        return sum(len(s.utterances) for s in self.speakers)


@dataclass
class RunConfig:
    """Everything a pipeline run needs; mirrors the CLI flags."""

    lexicon_path: Path | None = None
    cost_matrix_path: Path | None = None
    inventory_path: Path | None = None
    supplementary_lexicon_path: Path | None = None
    oov_policy: str = "fail"
    variant_rule: str = "first"
    tie_break: tuple[str, ...] = DEFAULT_TIE_BREAK
    k: int = 6
    seed: int = 0
    init: str = "kmeanspp"
    perplexity: float = 5.0
    learning_rate: float = 200.0
    tsne_iterations: int = 1000
    early_exaggeration: float = 12.0
    normalization: str = "raw_counts"
    top_k: int = 3
    min_occurrences: int = 20
    max_variant_combinations: int = 256
    out_dir: Path = Path("out")


@dataclass
class LoadedConfig:
    config: RunConfig
    inventory: PhonemeInventory
    lexicon: Lexicon | None
    costs: CostMatrix
    policy: OovPolicy


def load_config(config: RunConfig) -> LoadedConfig:
    """Parse every referenced file; raises before any alignment work starts."""
    if config.inventory_path is not None:
        inventory = load_inventory(config.inventory_path)
    else:
        inventory = PhonemeInventory.default()

    lexicon = None
    if config.lexicon_path is not None:
        lexicon = load_lexicon(config.lexicon_path, inventory)

    supplement = None
    if config.supplementary_lexicon_path is not None:
        supplement = load_lexicon(config.supplementary_lexicon_path, inventory)

    if config.oov_policy == "supplementary_lexicon" and supplement is None:
        raise ValidationError(
            "oov policy supplementary_lexicon requires --supplementary-lexicon"
        )
    policy = OovPolicy(config.oov_policy, supplement)

    if config.cost_matrix_path is not None:
        costs = load_cost_matrix(config.cost_matrix_path, inventory)
    else:
        costs = CostMatrix.uniform(inventory)

    return LoadedConfig(config, inventory, lexicon, costs, policy)
