#!/usr/bin/env python3
# Copyright 2026 The codeinterp Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Exports a BERT checkpoint as a TorchScript encoder directory.

The output directory holds encoder.pt, vocab.txt and manifest.json and is
what the C++ pretrained_encoder backend and further pretraining load.

  export_encoder.py --hf bert-base-chinese --out checkpoints/bert-base-chinese
  export_encoder.py --tiny-random --vocab-text corpus.txt --out tests/data/tiny-encoder

The scripted module mirrors the Hugging Face BertForPreTraining parameter
layout, so weights load by name and the export is checked numerically
against the reference implementation before it is written.
"""

import argparse
import json
import math
import pathlib
import shutil
import string
import sys
from typing import Tuple

import torch
from torch import nn
import torch.nn.functional as F


class Embeddings(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.word_embeddings = nn.Embedding(cfg["vocab_size"], cfg["hidden_size"])
    self.position_embeddings = nn.Embedding(cfg["max_position_embeddings"],
                                            cfg["hidden_size"])
    self.token_type_embeddings = nn.Embedding(cfg["type_vocab_size"],
                                              cfg["hidden_size"])
    self.LayerNorm = nn.LayerNorm(cfg["hidden_size"], eps=cfg["layer_norm_eps"])
    self.dropout = nn.Dropout(cfg["hidden_dropout_prob"])

  def forward(self, ids: torch.Tensor, token_type: torch.Tensor) -> torch.Tensor:
    positions = torch.arange(ids.size(1), device=ids.device).unsqueeze(0)
    x = (self.word_embeddings(ids) + self.position_embeddings(positions) +
         self.token_type_embeddings(token_type))
    return self.dropout(self.LayerNorm(x))


class SelfAttention(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.heads = cfg["num_attention_heads"]
    self.head_dim = cfg["hidden_size"] // self.heads
    self.query = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])
    self.key = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])
    self.value = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])
    self.dropout = nn.Dropout(cfg["attention_probs_dropout_prob"])

  def split(self, x: torch.Tensor) -> torch.Tensor:
    b, t, _ = x.shape
    return x.view(b, t, self.heads, self.head_dim).transpose(1, 2)

  def forward(self, x: torch.Tensor, bias: torch.Tensor) -> torch.Tensor:
    q = self.split(self.query(x))
    k = self.split(self.key(x))
    v = self.split(self.value(x))
    scores = torch.matmul(q, k.transpose(-1, -2)) / math.sqrt(self.head_dim)
    probs = self.dropout(torch.softmax(scores + bias, dim=-1))
    ctx = torch.matmul(probs, v).transpose(1, 2).contiguous()
    return ctx.view(x.size(0), x.size(1), -1)


class SelfOutput(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.dense = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])
    self.LayerNorm = nn.LayerNorm(cfg["hidden_size"], eps=cfg["layer_norm_eps"])
    self.dropout = nn.Dropout(cfg["hidden_dropout_prob"])

  def forward(self, h: torch.Tensor, residual: torch.Tensor) -> torch.Tensor:
    return self.LayerNorm(self.dropout(self.dense(h)) + residual)


class Attention(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.self = SelfAttention(cfg)
    self.output = SelfOutput(cfg)

  def forward(self, x: torch.Tensor, bias: torch.Tensor) -> torch.Tensor:
    return self.output(self.self(x, bias), x)


class Intermediate(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.dense = nn.Linear(cfg["hidden_size"], cfg["intermediate_size"])

  def forward(self, x: torch.Tensor) -> torch.Tensor:
    return F.gelu(self.dense(x))


class Output(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.dense = nn.Linear(cfg["intermediate_size"], cfg["hidden_size"])
    self.LayerNorm = nn.LayerNorm(cfg["hidden_size"], eps=cfg["layer_norm_eps"])
    self.dropout = nn.Dropout(cfg["hidden_dropout_prob"])

  def forward(self, h: torch.Tensor, residual: torch.Tensor) -> torch.Tensor:
    return self.LayerNorm(self.dropout(self.dense(h)) + residual)


class Layer(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.attention = Attention(cfg)
    self.intermediate = Intermediate(cfg)
    self.output = Output(cfg)

  def forward(self, x: torch.Tensor, bias: torch.Tensor) -> torch.Tensor:
    a = self.attention(x, bias)
    return self.output(self.intermediate(a), a)


class Encoder(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.layer = nn.ModuleList(
        [Layer(cfg) for _ in range(cfg["num_hidden_layers"])])

  def forward(self, x: torch.Tensor, bias: torch.Tensor) -> torch.Tensor:
    for layer in self.layer:
      x = layer(x, bias)
    return x


class Pooler(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.dense = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])

  def forward(self, x: torch.Tensor) -> torch.Tensor:
    return torch.tanh(self.dense(x[:, 0]))


class Bert(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.embeddings = Embeddings(cfg)
    self.encoder = Encoder(cfg)
    self.pooler = Pooler(cfg)

  def forward(self, ids: torch.Tensor, token_type: torch.Tensor,
              mask: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    x = self.embeddings(ids, token_type)
    # Additive mask at the float32 minimum, as the reference does.
    bias = (1.0 - mask[:, None, None, :].to(x.dtype)) * -3.4028234663852886e38
    h = self.encoder(x, bias)
    return h, self.pooler(h)


class Transform(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.dense = nn.Linear(cfg["hidden_size"], cfg["hidden_size"])
    self.LayerNorm = nn.LayerNorm(cfg["hidden_size"], eps=cfg["layer_norm_eps"])

  def forward(self, x: torch.Tensor) -> torch.Tensor:
    return self.LayerNorm(F.gelu(self.dense(x)))


class Predictions(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.transform = Transform(cfg)
    self.bias = nn.Parameter(torch.zeros(cfg["vocab_size"]))


class Heads(nn.Module):

  def __init__(self, cfg):
    super().__init__()
    self.predictions = Predictions(cfg)
    self.seq_relationship = nn.Linear(cfg["hidden_size"], 2)


class PreTrainingEncoder(nn.Module):
  """forward() returns masked-token and next-sentence logits; encode()
  returns the pooled sentence vector used for classification."""

  def __init__(self, cfg):
    super().__init__()
    self.bert = Bert(cfg)
    self.cls = Heads(cfg)

  def forward(self, ids: torch.Tensor, token_type: torch.Tensor,
              mask: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    h, pooled = self.bert(ids, token_type, mask)
    t = self.cls.predictions.transform(h)
    # Decoder weights are tied to the input embeddings.
    mlm = F.linear(t, self.bert.embeddings.word_embeddings.weight,
                   self.cls.predictions.bias)
    return mlm, self.cls.seq_relationship(pooled)

  @torch.jit.export
  def encode(self, ids: torch.Tensor, token_type: torch.Tensor,
             mask: torch.Tensor) -> torch.Tensor:
    return self.bert(ids, token_type, mask)[1]


CONFIG_KEYS = ("vocab_size", "hidden_size", "num_hidden_layers",
               "num_attention_heads", "intermediate_size",
               "max_position_embeddings", "type_vocab_size", "layer_norm_eps",
               "hidden_dropout_prob", "attention_probs_dropout_prob")


def check_against_reference(ours, ref, cfg, atol):
  """Compares outputs with a transformers BertForPreTraining in eval mode."""
  ours.eval()
  ref.eval()
  gen = torch.Generator().manual_seed(0)
  ids = torch.randint(0, cfg["vocab_size"], (3, 16), generator=gen)
  token_type = torch.zeros_like(ids)
  token_type[:, 8:] = 1
  mask = torch.ones_like(ids)
  mask[1, 12:] = 0
  with torch.no_grad():
    mlm, nsp = ours(ids, token_type, mask)
    pooled = ours.encode(ids, token_type, mask)
    r = ref(input_ids=ids, token_type_ids=token_type, attention_mask=mask)
    r_pooled = ref.bert(input_ids=ids, token_type_ids=token_type,
                        attention_mask=mask).pooler_output
  worst = max((mlm - r.prediction_logits).abs().max().item(),
              (nsp - r.seq_relationship_logits).abs().max().item(),
              (pooled - r_pooled).abs().max().item())
  if worst > atol:
    sys.exit(f"exported encoder deviates from reference by {worst:g}")
  return worst


def load_into(ours, state):
  missing, unexpected = ours.load_state_dict(state, strict=False)
  unexpected = [k for k in unexpected
                if not k.endswith("position_ids") and "decoder" not in k]
  if missing or unexpected:
    sys.exit(f"weight mismatch: missing={missing} unexpected={unexpected}")


def tiny_vocab(text_files):
  vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
  seen = set(vocab)

  def add(tok):
    if tok not in seen:
      seen.add(tok)
      vocab.append(tok)

  for ch in string.ascii_lowercase + string.digits + string.punctuation:
    add(ch)
  for ch in string.ascii_lowercase + string.digits:
    add("##" + ch)
  for path in text_files:
    for ch in sorted(set(pathlib.Path(path).read_text(encoding="utf-8"))):
      if ord(ch) >= 0x2E80 or (not ch.isspace() and not ch.isascii()):
        add(ch)
  return vocab


def write_reference(model, out, lower_case, texts_path, max_len=32):
  """Records tokenizer ids and pooled vectors from the reference stack."""
  import transformers
  tok = transformers.BertTokenizer(str(out / "vocab.txt"),
                                   do_lower_case=lower_case)
  cases = []
  model.eval()
  for text in texts_path.read_text(encoding="utf-8").splitlines():
    if not text.strip():
      continue
    enc = tok(text, max_length=max_len, truncation=True, padding="max_length",
              return_tensors="pt")
    with torch.no_grad():
      pooled = model.encode(enc["input_ids"], enc["token_type_ids"],
                            enc["attention_mask"])
    cases.append({
        "text": text,
        "tokens": tok.tokenize(text),
        "ids": enc["input_ids"][0].tolist(),
        "pooled": [round(v, 6) for v in pooled[0].tolist()],
    })
  (out / "reference.json").write_text(
      json.dumps({"max_len": max_len, "cases": cases}, ensure_ascii=False,
                 indent=1) + "\n", encoding="utf-8")


def main():
  ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  src = ap.add_mutually_exclusive_group(required=True)
  src.add_argument("--hf", help="transformers model name or local directory")
  src.add_argument("--tiny-random", action="store_true",
                   help="small randomly initialised encoder for tests")
  ap.add_argument("--vocab-text", nargs="*", default=[],
                  help="text files whose characters seed the tiny vocabulary")
  ap.add_argument("--out", required=True, type=pathlib.Path)
  ap.add_argument("--name", help="checkpoint id recorded in the manifest")
  ap.add_argument("--seed", type=int, default=0)
  ap.add_argument("--atol", type=float, default=1e-4)
  ap.add_argument("--reference-texts", type=pathlib.Path,
                  help="write reference.json with the transformers tokenizer "
                  "ids and pooled outputs for each line of this file")
  args = ap.parse_args()

  import transformers

  torch.manual_seed(args.seed)
  args.out.mkdir(parents=True, exist_ok=True)
  if args.tiny_random:
    vocab = tiny_vocab(args.vocab_text)
    (args.out / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    hf_cfg = transformers.BertConfig(
        vocab_size=len(vocab), hidden_size=32, num_hidden_layers=2,
        num_attention_heads=2, intermediate_size=64,
        max_position_embeddings=128)
    ref = transformers.BertForPreTraining(hf_cfg)
    lower_case = True
    name = args.name or "tiny-random"
  else:
    ref = transformers.BertForPreTraining.from_pretrained(args.hf)
    tok = transformers.BertTokenizer.from_pretrained(args.hf)
    hf_cfg = ref.config
    shutil.copyfile(tok.vocab_file, args.out / "vocab.txt")
    lower_case = bool(tok.do_lower_case)
    name = args.name or pathlib.Path(args.hf).name

  cfg = {k: getattr(hf_cfg, k) for k in CONFIG_KEYS}
  ours = PreTrainingEncoder(cfg)
  load_into(ours, ref.state_dict())
  worst = check_against_reference(ours, ref, cfg, args.atol)

  scripted = torch.jit.script(ours)
  scripted.save(str(args.out / "encoder.pt"))
  manifest = {
      "format": "codeinterp-encoder-v1",
      "checkpoint_id": name,
      "parent": None,
      "lower_case": lower_case,
      "config": cfg,
      "export_max_abs_deviation": worst,
  }
  (args.out / "manifest.json").write_text(
      json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
  if args.reference_texts:
    write_reference(ours, args.out, lower_case, args.reference_texts)
  print(f"wrote {args.out} (max deviation {worst:.3g})")


if __name__ == "__main__":
  main()
