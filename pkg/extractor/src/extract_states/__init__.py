"""One-shot export of transformer hidden states to CHSF files.

Reads a token file (`id<TAB>space-joined words`), runs a pretrained
encoder over each line, and writes every encoder layer's activations for
every subword into a CHSF container. The literal ``[#TRIGGERWORD#]`` is
replaced by the model's mask token and carries word index -1, like the
other special tokens.

CHSF layout (little-endian throughout):
  header: magic "CHSF", u32 version=1, u32 L, u32 D, u64 record_count
  record: u16 id_len, id bytes; u32 T; T x (u16 piece_len, piece, i32 word_index);
          L*T*D float32, ordered layer-major then token then dimension.
"""

import logging
import struct
from dataclasses import dataclass

import click
import numpy as np

log = logging.getLogger(__name__)

CHSF_MAGIC = b"CHSF"
CHSF_VERSION = 1
MASK_LITERAL = "[#TRIGGERWORD#]"
DEFAULT_MAX_LENGTH = 512

__version__ = "0.1.0"


@dataclass
class ExtractionJob:
    model: str
    input_path: str
    output_path: str
    max_length: int = DEFAULT_MAX_LENGTH


def read_token_file(path):
    """Yield (id, [words]) from an `id<TAB>space-joined words` file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[1].strip():
                raise ValueError(f"{path}:{lineno}: expected id<TAB>words")
            yield parts[0], parts[1].split()


def write_chsf(path, records, L, D):
    """Write (sentence_id, [(piece, word_index)], activations) triples."""
    with open(path, "wb") as fh:
        fh.write(CHSF_MAGIC)
        fh.write(struct.pack("<IIIQ", CHSF_VERSION, L, D, len(records)))
        for sentence_id, tokens, activations in records:
            if activations.shape != (L, len(tokens), D):
                raise ValueError(
                    f"{sentence_id}: shape {activations.shape} vs "
                    f"({L}, {len(tokens)}, {D})"
                )
            id_bytes = sentence_id.encode("utf-8")
            fh.write(struct.pack("<H", len(id_bytes)))
            fh.write(id_bytes)
            fh.write(struct.pack("<I", len(tokens)))
            for piece, word_index in tokens:
                pb = piece.encode("utf-8")
                fh.write(struct.pack("<H", len(pb)))
                fh.write(pb)
                fh.write(struct.pack("<i", word_index))
            fh.write(np.ascontiguousarray(activations, dtype="<f4").tobytes())


def _encode_sentence(tokenizer, model, words, max_length):
    """Run one sentence; returns (tokens, activations) with word-aligned
    subword indices. Mask-literal words and special tokens carry -1."""
    import torch

    mask_positions = {i for i, w in enumerate(words) if w == MASK_LITERAL}
    inputs = [tokenizer.mask_token if w == MASK_LITERAL else w for w in words]
    enc = tokenizer(
        inputs,
        is_split_into_words=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )
    word_ids = enc.word_ids()
    with torch.no_grad():
        out = model(**enc, output_hidden_states=True)
    # hidden_states[0] is the embedding layer; keep encoder layers only
    stacked = torch.stack(out.hidden_states[1:])[:, 0]
    activations = stacked.to(torch.float32).cpu().numpy()

    pieces = tokenizer.convert_ids_to_tokens(enc["input_ids"][0])
    tokens = [
        (piece, -1 if wid is None or wid in mask_positions else wid)
        for piece, wid in zip(pieces, word_ids)
    ]
    covered = {wid for wid in word_ids if wid is not None}
    dropped = sorted(set(range(len(words))) - covered - mask_positions)
    return tokens, activations, dropped


def extract(job: ExtractionJob) -> int:
    """Run the job; returns the number of records written."""
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(job.model)
    model = AutoModel.from_pretrained(job.model)
    model.eval()
    L = model.config.num_hidden_layers
    D = model.config.hidden_size

    records = []
    for sentence_id, words in read_token_file(job.input_path):
        try:
            tokens, activations, dropped = _encode_sentence(
                tokenizer, model, words, job.max_length
            )
        except Exception:
            log.exception("%s: tokenization/inference failed, record skipped",
                          sentence_id)
            continue
        if dropped:
            log.warning("%s: truncated at %d subwords, dropped word positions %s",
                        sentence_id, job.max_length, dropped)
        records.append((sentence_id, tokens, activations))
    write_chsf(job.output_path, records, L, D)
    return len(records)


@click.command()
@click.option("--model", required=True, help="pretrained model name or path")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="token file: id<TAB>space-joined words")
@click.option("--out", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--max-len", default=DEFAULT_MAX_LENGTH, show_default=True,
              help="subword truncation length")
def main(model, input_path, output_path, max_len):
    """Write all encoder-layer hidden states for each input line to OUT."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    n = extract(ExtractionJob(model, input_path, output_path, max_len))
    click.echo(f"wrote {n} records to {output_path}")
