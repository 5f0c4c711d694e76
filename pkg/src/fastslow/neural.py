"""Small dense network with softmax heads, trained by Adam on cross-entropy.

Written directly against numpy so the gradients stay inspectable and can be
checked against finite differences. The same architecture serves as the
goal-conditioned action policy (single 4- or 5-way head) and as the
two-headed next-state predictor; grid coordinates are normalized to [0, 1]
before they reach the first layer.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

LOG_FLOOR = 1e-12  # keeps -log(p) finite when a head saturates


class TrainingPair(NamedTuple):
    """One replay sample: (start, goal) input and the class index per head."""

    start: tuple[int, int]
    goal: tuple[int, int]
    target: int | tuple[int, ...]


class Adam:
    """Adam with bias correction; moment shapes mirror the parameters."""

    def __init__(self, learning_rate: float = 0.001, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8) -> None:
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        self.step_count += 1
        t = self.step_count
        correction1 = 1.0 - self.beta1**t
        correction2 = 1.0 - self.beta2**t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            p -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class MLP:
    """input(4) -> ReLU(128) -> ReLU(128) -> one softmax head per entry of heads.

    ``scale`` is the coordinate normalizer (grid size minus one).
    """

    def __init__(
        self,
        heads: Sequence[int],
        scale: float,
        in_dim: int = 4,
        hidden: Sequence[int] = (128, 128),
        rng: np.random.Generator | int | None = None,
    ) -> None:
        rng = np.random.default_rng(rng)
        self.heads = tuple(int(h) for h in heads)
        self.scale = float(scale)
        self.in_dim = in_dim
        self.hidden = tuple(hidden)
        sizes = (in_dim, *hidden)
        self.layers = [_init_layer(rng, sizes[i], sizes[i + 1]) for i in range(len(sizes) - 1)]
        self.head_layers = [_init_layer(rng, sizes[-1], width) for width in self.heads]

    # ------------------------------------------------------------- inference
    def forward(self, start, goal) -> np.ndarray | tuple[np.ndarray, ...]:
        """Probability vector(s) for one (start, goal) input."""
        probs = self.forward_batch(self.encode_coords([start], [goal]))
        if len(probs) == 1:
            return probs[0][0]
        return tuple(p[0] for p in probs)

    def forward_batch(self, x: np.ndarray) -> list[np.ndarray]:
        h = x
        for w, b in self.layers:
            h = np.maximum(h @ w + b, 0.0)
        return [_softmax(h @ w + b) for w, b in self.head_layers]

    def encode_coords(self, starts, goals) -> np.ndarray:
        s = np.asarray(starts, dtype=float).reshape(-1, 2)
        g = np.asarray(goals, dtype=float).reshape(-1, 2)
        return np.concatenate([s, g], axis=1) / self.scale

    def encode_pairs(self, pairs: Sequence[TrainingPair]) -> tuple[np.ndarray, np.ndarray]:
        x = self.encode_coords([p.start for p in pairs], [p.goal for p in pairs])
        targets = np.array(
            [p.target if isinstance(p.target, tuple) else (p.target,) for p in pairs], dtype=int
        )
        return x, targets

    # -------------------------------------------------------------- training
    def loss(self, pairs: Sequence[TrainingPair]) -> float:
        x, targets = self.encode_pairs(pairs)
        return self.loss_on_arrays(x, targets)

    def loss_on_arrays(self, x: np.ndarray, targets: np.ndarray) -> float:
        probs = self.forward_batch(x)
        rows = np.arange(x.shape[0])
        total = 0.0
        for head, p in enumerate(probs):
            total += -np.log(np.maximum(p[rows, targets[:, head]], LOG_FLOOR)).sum()
        return total / (x.shape[0] * len(probs))

    def loss_and_grads(self, x: np.ndarray, targets: np.ndarray) -> tuple[float, list[np.ndarray]]:
        """Mean cross-entropy over batch and heads, plus its gradient in the
        same order as :meth:`parameters`."""
        batch = x.shape[0]
        rows = np.arange(batch)
        activations = [x]
        pre_acts = []
        h = x
        for w, b in self.layers:
            z = h @ w + b
            pre_acts.append(z)
            h = np.maximum(z, 0.0)
            activations.append(h)

        denom = batch * len(self.head_layers)
        loss = 0.0
        head_grads: list[np.ndarray] = []
        d_hidden = np.zeros_like(h)
        for head, (w, b) in enumerate(self.head_layers):
            p = _softmax(h @ w + b)
            loss += -np.log(np.maximum(p[rows, targets[:, head]], LOG_FLOOR)).sum()
            dlogits = p
            dlogits[rows, targets[:, head]] -= 1.0
            dlogits /= denom
            head_grads.extend([h.T @ dlogits, dlogits.sum(axis=0)])
            d_hidden += dlogits @ w.T
        loss /= denom

        layer_grads: list[np.ndarray] = []
        grad = d_hidden
        for i in range(len(self.layers) - 1, -1, -1):
            grad = grad * (pre_acts[i] > 0)
            layer_grads.append(grad.sum(axis=0))
            layer_grads.append(activations[i].T @ grad)
            grad = grad @ self.layers[i][0].T
        layer_grads.reverse()
        return loss, layer_grads + head_grads

    def parameters(self) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for w, b in self.layers + self.head_layers:
            out.extend([w, b])
        return out


def _init_layer(rng: np.random.Generator, fan_in: int, fan_out: int) -> tuple[np.ndarray, np.ndarray]:
    bound = np.sqrt(1.0 / fan_in)
    w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
    b = rng.uniform(-bound, bound, size=fan_out)
    return w, b


def train_on_arrays(net: MLP, adam: Adam, x: np.ndarray, targets: np.ndarray) -> float:
    """One Adam update on the full batch gradient; returns the pre-update loss."""
    loss, grads = net.loss_and_grads(x, targets)
    adam.step(net.parameters(), grads)
    return loss


def train_step(net: MLP, adam: Adam, pairs: Sequence[TrainingPair]) -> float:
    if not pairs:
        raise ValueError("training batch must be nonempty")
    x, targets = net.encode_pairs(pairs)
    return train_on_arrays(net, adam, x, targets)


def save_params(net: MLP, path) -> None:
    """Binary checkpoint (layer shapes travel with the arrays)."""
    arrays = {f"p{i}": p for i, p in enumerate(net.parameters())}
    np.savez(
        path,
        heads=np.asarray(net.heads),
        scale=np.asarray(net.scale),
        hidden=np.asarray(net.hidden),
        in_dim=np.asarray(net.in_dim),
        **arrays,
    )


def load_params(path) -> MLP:
    with np.load(path) as data:
        net = MLP(
            heads=tuple(int(h) for h in data["heads"]),
            scale=float(data["scale"]),
            in_dim=int(data["in_dim"]),
            hidden=tuple(int(h) for h in data["hidden"]),
        )
        for i, p in enumerate(net.parameters()):
            p[...] = data[f"p{i}"]
    return net
