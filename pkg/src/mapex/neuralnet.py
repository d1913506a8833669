"""Forward-pass engine for the convolutional map-completion autoencoder, plus
the MPW1 weight-file codec shared with the offline trainer.

Architecture (fixed, 20 layers):
  0      input embed: 1x1 conv over the 3 one-hot channels, no bias, linear
  1..9   encoder: 3x3 convs, 25 channels, ReLU; stride 2 at layers 3, 6, 9
  10..18 decoder: mirror image; transposed 3x3 stride-2 convs at 10, 13, 16,
         additive skip connections from the matching-resolution encoder
         outputs (8 -> 10+, 5 -> 13+, 2 -> 16+); layer 18 takes the embedded
         input concatenated as an extra channel
  19     output head: 3x3 conv to 1 channel, sigmoid

Convolutions use TensorFlow-style SAME padding (asymmetric: extra cell on the
bottom/right when the total is odd); transposed convolutions are the exact
adjoint, targeting the spatial size recorded before the mirror stride-2
encoder layer. Both rules are part of the MPW1 contract.

MPW1 file layout (little-endian):
  magic "MPW1" | version u32 | input_h u16 | input_w u16 | layer_count u32
  per layer: kind u8, in_ch u16, out_ch u16, kh u8, kw u8, stride u8,
             flags u8 (bit0 bias, bit1 stacks_input, bit2 skip), skip_src u8
  per layer: kernel f32[out*in*kh*kw] in (out, in, kh, kw) order,
             then bias f32[out] if present
  crc32 u32 over every preceding byte
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

MAGIC = b"MPW1"
FORMAT_VERSION = 1

KIND_INPUT_EMBED = 0
KIND_CONV = 1
KIND_TRANSPOSED_CONV = 2
KIND_OUTPUT_HEAD = 3

_NO_SKIP = 0xFF

HIDDEN_CHANNELS = 25


class CodecError(ValueError):
    """Corrupt, truncated, or inconsistent MPW1 data."""


@dataclass
class LayerSpec:
    kind: int
    in_channels: int
    out_channels: int
    kernel: tuple[int, int]
    stride: int = 1
    has_bias: bool = True
    skip_source: int | None = None
    stacks_input: bool = False
    weights: np.ndarray = field(default=None, repr=False)   # (out, in, kh, kw)
    bias: np.ndarray = field(default=None, repr=False)      # (out,)

    def param_count(self) -> int:
        kh, kw = self.kernel
        n = self.out_channels * self.in_channels * kh * kw
        return n + (self.out_channels if self.has_bias else 0)

    def validate(self):
        kh, kw = self.kernel
        if self.kind == KIND_INPUT_EMBED:
            if (kh, kw) != (1, 1) or self.has_bias:
                raise CodecError("input embed must be a bias-free 1x1 kernel")
        elif (kh, kw) != (3, 3):
            raise CodecError("conv kernels must be 3x3")
        if self.stride not in (1, 2):
            raise CodecError(f"unsupported stride {self.stride}")
        if self.weights is None or self.weights.shape != (self.out_channels, self.in_channels, kh, kw):
            raise CodecError("kernel block does not match declared layer shape")
        if self.has_bias and (self.bias is None or self.bias.shape != (self.out_channels,)):
            raise CodecError("bias block does not match declared layer shape")


@dataclass
class PredictorWeights:
    input_hw: tuple[int, int]
    layers: list[LayerSpec]
    format_version: int = FORMAT_VERSION


def _same_pad(size: int, k: int, s: int) -> tuple[int, int]:
    """(pad_begin, out_size) for TF SAME padding."""
    out = -(-size // s)
    total = max((out - 1) * s + k - size, 0)
    return total // 2, out


def conv2d(x: np.ndarray, layer: LayerSpec) -> np.ndarray:
    """SAME-padded cross-correlation; x is (C, H, W)."""
    if x.shape[0] != layer.in_channels:
        raise ValueError(f"expected {layer.in_channels} channels, got {x.shape[0]}")
    kh, kw = layer.kernel
    s = layer.stride
    _, h, w = x.shape
    pbh, ho = _same_pad(h, kh, s)
    pbw, wo = _same_pad(w, kw, s)
    xpad = np.pad(x, ((0, 0), (pbh, (ho - 1) * s + kh - h - pbh),
                      (pbw, (wo - 1) * s + kw - w - pbw)))
    out = np.zeros((layer.out_channels, ho, wo), dtype=np.float32)
    for a in range(kh):
        for b in range(kw):
            out += np.einsum("oc,chw->ohw", layer.weights[:, :, a, b],
                             xpad[:, a:a + s * ho:s, b:b + s * wo:s])
    if layer.has_bias:
        out += layer.bias[:, None, None]
    return out


def transposed_conv2d(x: np.ndarray, layer: LayerSpec, out_hw: tuple[int, int]) -> np.ndarray:
    """Adjoint of conv2d at the given output size; x is (C, Hi, Wi)."""
    if x.shape[0] != layer.in_channels:
        raise ValueError(f"expected {layer.in_channels} channels, got {x.shape[0]}")
    kh, kw = layer.kernel
    s = layer.stride
    _, hi, wi = x.shape
    ho, wo = out_hw
    pbh, back_h = _same_pad(ho, kh, s)
    pbw, back_w = _same_pad(wo, kw, s)
    if (back_h, back_w) != (hi, wi):
        raise ValueError(f"target size {out_hw} is not reachable from input {(hi, wi)} at stride {s}")
    canvas = np.zeros((layer.out_channels, (hi - 1) * s + kh, (wi - 1) * s + kw), dtype=np.float32)
    for a in range(kh):
        for b in range(kw):
            canvas[:, a:a + s * hi:s, b:b + s * wi:s] += np.einsum(
                "oc,chw->ohw", layer.weights[:, :, a, b], x)
    out = canvas[:, pbh:pbh + ho, pbw:pbw + wo]
    if layer.has_bias:
        out = out + layer.bias[:, None, None]
    return out


def _relu(x):
    return np.maximum(x, 0.0)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def forward(weights: PredictorWeights, one_hot: np.ndarray) -> np.ndarray:
    """Run the network on a 3xHxW one-hot observation; returns HxW probabilities."""
    if one_hot.shape[1:] != weights.input_hw:
        raise ValueError(f"input {one_hot.shape[1:]} does not match declared dims {weights.input_hw}")
    x = one_hot.astype(np.float32)
    outputs = {}
    embedded = None
    size_stack = []
    for i, layer in enumerate(weights.layers):
        if layer.stacks_input:
            x = np.concatenate([x, embedded], axis=0)
        if layer.kind == KIND_TRANSPOSED_CONV:
            z = transposed_conv2d(x, layer, size_stack.pop())
        else:
            if layer.stride == 2:
                size_stack.append(x.shape[1:])
            z = conv2d(x, layer)
        if layer.skip_source is not None:
            z = z + outputs[layer.skip_source]
        if layer.kind == KIND_INPUT_EMBED:
            x = z
            embedded = z
        elif layer.kind == KIND_OUTPUT_HEAD:
            x = _sigmoid(z)
        else:
            x = _relu(z)
        outputs[i] = x
    if x.shape[0] != 1:
        raise CodecError("network must end in a single-channel head")
    return x[0].astype(np.float64)


def architecture(input_hw: tuple[int, int] = (64, 64)) -> PredictorWeights:
    """The canonical layer table, with weight blocks left unset."""
    c = HIDDEN_CHANNELS
    layers = [LayerSpec(KIND_INPUT_EMBED, 3, 1, (1, 1), has_bias=False)]
    for i in range(1, 10):
        layers.append(LayerSpec(KIND_CONV, 1 if i == 1 else c, c, (3, 3),
                                stride=2 if i % 3 == 0 else 1))
    skips = {10: 8, 13: 5, 16: 2}
    for i in range(10, 19):
        kind = KIND_TRANSPOSED_CONV if i in (10, 13, 16) else KIND_CONV
        layers.append(LayerSpec(kind, c + 1 if i == 18 else c, c, (3, 3),
                                stride=2 if kind == KIND_TRANSPOSED_CONV else 1,
                                skip_source=skips.get(i),
                                stacks_input=(i == 18)))
    layers.append(LayerSpec(KIND_OUTPUT_HEAD, c, 1, (3, 3)))
    return PredictorWeights(input_hw=tuple(input_hw), layers=layers)


def random_weights(input_hw=(64, 64), seed=0) -> PredictorWeights:
    """He-initialized random weights over the canonical architecture."""
    rng = np.random.default_rng(seed)
    net = architecture(input_hw)
    for layer in net.layers:
        kh, kw = layer.kernel
        fan_in = layer.in_channels * kh * kw
        layer.weights = rng.normal(0.0, np.sqrt(2.0 / fan_in),
                                   (layer.out_channels, layer.in_channels, kh, kw)).astype(np.float32)
        if layer.has_bias:
            layer.bias = np.zeros(layer.out_channels, dtype=np.float32)
        layer.validate()
    return net


def save_weights(weights: PredictorWeights) -> bytes:
    parts = [MAGIC, struct.pack("<IHHI", weights.format_version,
                                weights.input_hw[0], weights.input_hw[1],
                                len(weights.layers))]
    for layer in weights.layers:
        layer.validate()
        flags = (layer.has_bias) | (layer.stacks_input << 1) | ((layer.skip_source is not None) << 2)
        skip = layer.skip_source if layer.skip_source is not None else _NO_SKIP
        parts.append(struct.pack("<BHHBBBBB", layer.kind, layer.in_channels,
                                 layer.out_channels, layer.kernel[0], layer.kernel[1],
                                 layer.stride, flags, skip))
    for layer in weights.layers:
        parts.append(layer.weights.astype("<f4").tobytes())
        if layer.has_bias:
            parts.append(layer.bias.astype("<f4").tobytes())
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def load_weights(data: bytes) -> PredictorWeights:
    if len(data) < 8 or data[:4] != MAGIC:
        raise CodecError("bad magic: not an MPW1 weight file")
    if zlib.crc32(data[:-4]) != struct.unpack("<I", data[-4:])[0]:
        raise CodecError("checksum mismatch")
    pos = 4
    version, h, w, count = struct.unpack_from("<IHHI", data, pos)
    pos += 12
    if version != FORMAT_VERSION:
        raise CodecError(f"unsupported format version {version}")
    layers = []
    try:
        for _ in range(count):
            kind, cin, cout, kh, kw, stride, flags, skip = struct.unpack_from("<BHHBBBBB", data, pos)
            pos += struct.calcsize("<BHHBBBBB")
            layers.append(LayerSpec(
                kind, cin, cout, (kh, kw), stride=stride,
                has_bias=bool(flags & 1), stacks_input=bool(flags & 2),
                skip_source=skip if flags & 4 else None))
        for layer in layers:
            n = layer.out_channels * layer.in_channels * layer.kernel[0] * layer.kernel[1]
            layer.weights = np.frombuffer(data, dtype="<f4", count=n, offset=pos).reshape(
                layer.out_channels, layer.in_channels, *layer.kernel).copy()
            pos += 4 * n
            if layer.has_bias:
                layer.bias = np.frombuffer(data, dtype="<f4", count=layer.out_channels,
                                           offset=pos).copy()
                pos += 4 * layer.out_channels
    except (struct.error, ValueError) as exc:
        raise CodecError(f"truncated weight file: {exc}") from None
    if pos != len(data) - 4:
        raise CodecError("trailing bytes after parameter blocks")
    net = PredictorWeights(input_hw=(h, w), layers=layers, format_version=version)
    for layer in net.layers:
        layer.validate()
    return net


def read_weights_file(path) -> PredictorWeights:
    with open(path, "rb") as fh:
        return load_weights(fh.read())


def write_weights_file(path, weights: PredictorWeights) -> None:
    with open(path, "wb") as fh:
        fh.write(save_weights(weights))


class LearnedPredictor:
    """Predictor backed by an MPW1 weight file."""

    def __init__(self, weights: PredictorWeights):
        self.weights = weights

    @classmethod
    def from_file(cls, path):
        return cls(read_weights_file(path))

    def predict(self, obs: np.ndarray) -> np.ndarray:
        from .grid import encode_one_hot

        return forward(self.weights, encode_one_hot(obs))
