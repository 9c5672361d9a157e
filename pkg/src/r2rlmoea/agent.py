"""Double deep Q-network in plain numpy.

The network is a stack of dense layers with rectifier hidden units and a
linear head. Weight matrices are stored ``(fan_in, fan_out)`` so a forward
pass is ``h @ W + b``.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"R2RLQNET"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass
class QNetwork:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @classmethod
    def initialize(cls, layer_sizes, rng: np.random.Generator) -> "QNetwork":
        ws, bs = [], []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            ws.append(rng.uniform(-limit, limit, (fan_in, fan_out)))
            bs.append(np.zeros(fan_out))
        return cls(ws, bs)

    @classmethod
    def zeros(cls, layer_sizes) -> "QNetwork":
        return cls(
            [np.zeros((a, b)) for a, b in zip(layer_sizes[:-1], layer_sizes[1:])],
            [np.zeros(b) for b in layer_sizes[1:]],
        )

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def copy(self) -> "QNetwork":
        return QNetwork([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def params(self) -> list[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def equals(self, other: "QNetwork") -> bool:
        a, b = self.params(), other.params()
        return len(a) == len(b) and all(x.shape == y.shape and np.array_equal(x, y) for x, y in zip(a, b))

    def __call__(self, states) -> np.ndarray:
        return forward(self, states)


def forward(net: QNetwork, state) -> np.ndarray:
    s = np.asarray(state, dtype=np.float64)
    if s.shape[-1] != net.weights[0].shape[0]:
        raise ValueError(f"expected input width {net.weights[0].shape[0]}, got {s.shape[-1]}")
    h = s
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        h = h @ w + b
        if i < last:
            h = np.maximum(h, 0.0)
    return h


def loss_and_grads(net: QNetwork, states, actions, targets) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Mean squared error on the taken actions and its parameter gradients.

    ``targets`` are treated as constants.
    """
    states = np.atleast_2d(np.asarray(states, dtype=np.float64))
    actions = np.asarray(actions, dtype=np.intp)
    targets = np.asarray(targets, dtype=np.float64)
    batch = states.shape[0]
    acts = [states]
    pre = []
    h = states
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0) if i < last else z
        acts.append(h)
    q = acts[-1]
    rows = np.arange(batch)
    err = q[rows, actions] - targets
    loss = float(np.mean(err**2))
    delta = np.zeros_like(q)
    delta[rows, actions] = 2.0 * err / batch
    gw: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    gb: list[np.ndarray] = [None] * len(net.weights)  # type: ignore[list-item]
    for i in range(last, -1, -1):
        gw[i] = acts[i].T @ delta
        gb[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ net.weights[i].T) * (pre[i - 1] > 0.0)
    return loss, gw, gb


def select_action(q_values, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy; greedy ties go to the lowest index."""
    q = np.asarray(q_values)
    if rng.random() < epsilon:
        return int(rng.integers(0, q.size))
    return int(np.argmax(q))


def epsilon_schedule(game_index: int, n_game: int, eps_initial: float = 0.9, eps_final: float = 1e-3, power: int = 3) -> float:
    frac = (n_game - game_index) / n_game
    return frac**power * (eps_initial - eps_final) + eps_final


def ddqn_targets(rewards, next_states, terminal, main: QNetwork, target: QNetwork, gamma: float) -> np.ndarray:
    """Batch targets: the main net picks the next action, the target net scores it."""
    rewards = np.asarray(rewards, dtype=np.float64)
    terminal = np.asarray(terminal, dtype=bool)
    next_states = np.atleast_2d(next_states)
    best = np.argmax(forward(main, next_states), axis=1)
    q_eval = forward(target, next_states)[np.arange(best.size), best]
    return np.where(terminal, rewards, rewards + gamma * q_eval)


@dataclass(frozen=True)
class Transition:
    s: np.ndarray
    a: int
    r: float
    s_next: np.ndarray
    terminal: bool


def ddqn_target(t: Transition, main: QNetwork, target: QNetwork, gamma: float) -> float:
    return float(ddqn_targets([t.r], [t.s_next], [t.terminal], main, target, gamma)[0])


class ReplayBuffer:
    """Fixed-capacity ring buffer; the oldest transition is overwritten first."""

    def __init__(self, capacity: int, state_dim: int = 20):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.s = np.zeros((capacity, state_dim))
        self.a = np.zeros(capacity, dtype=np.int64)
        self.r = np.zeros(capacity)
        self.s_next = np.zeros((capacity, state_dim))
        self.terminal = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, t: Transition) -> None:
        i = self._next
        self.s[i] = t.s
        self.a[i] = t.a
        self.r[i] = t.r
        self.s_next[i] = t.s_next
        self.terminal[i] = t.terminal
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def items(self) -> list[Transition]:
        """Stored transitions, oldest first."""
        start = self._next if self._size == self.capacity else 0
        idx = [(start + k) % self.capacity for k in range(self._size)]
        return [self._get(i) for i in idx]

    def _get(self, i: int) -> Transition:
        return Transition(self.s[i].copy(), int(self.a[i]), float(self.r[i]), self.s_next[i].copy(), bool(self.terminal[i]))

    def sample_indices(self, k: int, rng: np.random.Generator) -> np.ndarray:
        if self._size < k:
            raise ValueError(f"buffer holds {self._size} transitions, cannot sample {k}")
        return rng.integers(0, self._size, k)

    def sample(self, k: int, rng: np.random.Generator) -> list[Transition]:
        return [self._get(int(i)) for i in self.sample_indices(k, rng)]


def train_step(
    main: QNetwork,
    target: QNetwork,
    buffer: ReplayBuffer,
    batch_size: int,
    learning_rate: float,
    rng: np.random.Generator,
    gamma: float = 0.9,
) -> float:
    """One SGD step on a uniform minibatch; returns the loss before the step."""
    idx = buffer.sample_indices(batch_size, rng)
    y = ddqn_targets(buffer.r[idx], buffer.s_next[idx], buffer.terminal[idx], main, target, gamma)
    return sgd_update(main, buffer.s[idx], buffer.a[idx], y, learning_rate)


def sgd_update(net: QNetwork, states, actions, targets, learning_rate: float) -> float:
    """In-place gradient step on ``net``; returns the loss before the step."""
    loss, gw, gb = loss_and_grads(net, states, actions, targets)
    for w, g in zip(net.weights, gw):
        w -= learning_rate * g
    for b, g in zip(net.biases, gb):
        b -= learning_rate * g
    return loss


def sync_target(main: QNetwork, target: QNetwork, counter: int, target_sync: int) -> tuple[QNetwork, int]:
    """Hard copy once ``counter`` reaches ``target_sync``; returns the new counter."""
    if counter >= target_sync:
        return main.copy(), 0
    return target, counter


@dataclass
class DDQNAgent:
    """Main net, target net, replay buffer and the update counter."""

    main: QNetwork
    target: QNetwork
    buffer: ReplayBuffer
    gamma: float = 0.9
    batch_size: int = 64
    learning_rate: float = 1e-3
    target_sync: int = 1000
    counter: int = 0
    losses: list[float] = field(default_factory=list)

    @classmethod
    def create(cls, cfg, rng: np.random.Generator) -> "DDQNAgent":
        main = QNetwork.initialize(cfg.layer_sizes, rng)
        return cls(
            main=main,
            target=main.copy(),
            buffer=ReplayBuffer(cfg.replay_size, cfg.n_states),
            gamma=cfg.gamma,
            batch_size=cfg.batch_size,
            learning_rate=cfg.learning_rate,
            target_sync=cfg.target_sync,
        )

    def q_values(self, state) -> np.ndarray:
        return forward(self.main, state)

    def observe(self, t: Transition, rng: np.random.Generator) -> float | None:
        self.buffer.push(t)
        if len(self.buffer) < self.batch_size:
            return None
        with np.errstate(over="ignore", invalid="ignore"):  # divergence is reported below
            loss = train_step(self.main, self.target, self.buffer, self.batch_size, self.learning_rate, rng, self.gamma)
        if not np.isfinite(loss) or not all(np.all(np.isfinite(p)) for p in self.main.params()):
            raise FloatingPointError("Q-network diverged: non-finite loss or parameters")
        self.counter += 1
        self.target, self.counter = sync_target(self.main, self.target, self.counter, self.target_sync)
        return loss


# --- checkpoint file ----------------------------------------------------------


def save_checkpoint(path, net: QNetwork, metadata: dict) -> Path:
    """Little-endian binary: header, dense layers, then JSON metadata."""
    path = Path(path)
    out = bytearray(MAGIC)
    out += struct.pack("<II", FORMAT_VERSION, len(net.weights))
    for w, b in zip(net.weights, net.biases):
        rows, cols = w.shape
        out += struct.pack("<II", rows, cols)
        out += np.ascontiguousarray(w, dtype="<f8").tobytes()
        out += np.ascontiguousarray(b, dtype="<f8").tobytes()
    meta = json.dumps(metadata, sort_keys=True).encode("utf-8")
    out += struct.pack("<I", len(meta)) + meta
    path.write_bytes(bytes(out))
    return path


def _read(buf: bytes, offset: int, n: int, what: str) -> bytes:
    if offset + n > len(buf):
        raise CheckpointError(f"truncated checkpoint: {what} needs {n} bytes at offset {offset}, file has {len(buf)}")
    return buf[offset : offset + n]


def load_checkpoint(path) -> tuple[QNetwork, dict]:
    buf = Path(path).read_bytes()
    if _read(buf, 0, len(MAGIC), "magic") != MAGIC:
        raise CheckpointError("bad magic string at offset 0")
    off = len(MAGIC)
    version, n_layers = struct.unpack("<II", _read(buf, off, 8, "header"))
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported format version {version} at offset {off}")
    off += 8
    if n_layers < 1:
        raise CheckpointError(f"layer count {n_layers} at offset {off - 4} is invalid")
    ws, bs = [], []
    for _ in range(n_layers):
        rows, cols = struct.unpack("<II", _read(buf, off, 8, "layer shape"))
        if ws and rows != ws[-1].shape[1]:
            raise CheckpointError(f"layer shape {rows}x{cols} at offset {off} does not chain with the previous layer")
        off += 8
        w = np.frombuffer(_read(buf, off, 8 * rows * cols, "weights"), dtype="<f8").reshape(rows, cols)
        off += 8 * rows * cols
        b = np.frombuffer(_read(buf, off, 8 * cols, "biases"), dtype="<f8")
        off += 8 * cols
        ws.append(w.astype(np.float64))
        bs.append(b.astype(np.float64))
    (n_meta,) = struct.unpack("<I", _read(buf, off, 4, "metadata length"))
    off += 4
    raw = _read(buf, off, n_meta, "metadata")
    try:
        meta = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"metadata at offset {off} is not valid UTF-8 JSON: {exc}") from None
    if off + n_meta != len(buf):
        raise CheckpointError(f"unexpected trailing bytes at offset {off + n_meta}")
    return QNetwork(ws, bs), meta
