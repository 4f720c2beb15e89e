"""``key = value`` run configuration and the initial-data expression language.

Initial data are written as expressions in ``x``, for example::

    v0 = 0.3 * sin(2*pi*x)
    m0 = 1 + 0.3 * cos(2*pi*x)
    u0 = randtrig(4, 0.1)

Allowed: numbers, ``x``, ``pi``, ``L`` (torus length), ``+ - * / **``, and
the functions ``sin cos exp sqrt log tanh`` plus ``randtrig(modes, amplitude)``,
a seeded random trigonometric polynomial of period ``L``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

import numpy as np

from .core import PeriodicGrid, SimConfig
from .models import ModelKind, ModelSpec


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


MODEL_NAMES = {
    "qq": ModelKind.QUADRATIC_QUADRATIC,
    "quadratic": ModelKind.QUADRATIC_QUADRATIC,
    "psystem": ModelKind.PSYSTEM,
    "p-system": ModelKind.PSYSTEM,
    "linear": ModelKind.LINEAR_EXACT,
}

KEYS = (
    "model", "n_cells", "length", "t_end", "cfl", "epsilon", "snapshot_interval",
    "v0", "m0", "w0", "u0", "g", "seed", "recenter",
)

_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt, "log": np.log, "tanh": np.tanh}
_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load, ast.Constant,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
)


def random_trig(rng: np.random.Generator, modes: int, amplitude: float, length: float):
    """``sum_k a_k cos(2 pi k x / L) + b_k sin(2 pi k x / L)`` with ``|a_k|, |b_k| <= amplitude / k**2``."""
    modes = int(modes)
    if modes < 1:
        raise ValueError("randtrig needs at least one mode")
    k = np.arange(1, modes + 1)
    a = rng.uniform(-1, 1, modes) * amplitude / k**2
    b = rng.uniform(-1, 1, modes) * amplitude / k**2

    def f(x):
        phase = 2 * np.pi * np.multiply.outer(x, k) / length
        return np.cos(phase) @ a + np.sin(phase) @ b

    return f


@dataclass(frozen=True)
class InitialExpression:
    """A compiled initial-data expression; callable on real or complex arrays."""

    text: str
    length: float = 1.0
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        try:
            tree = ast.parse(self.text.strip(), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse expression {self.text!r}") from exc
        for node in ast.walk(tree):
            if not isinstance(node, _NODES):
                raise ValueError(f"unsupported syntax {type(node).__name__} in {self.text!r}")
            if isinstance(node, ast.Name) and node.id not in ("x", "pi", "L", *_FUNCS, "randtrig"):
                raise ValueError(f"unknown name {node.id!r} in {self.text!r}")
            if isinstance(node, ast.Call) and (not isinstance(node.func, ast.Name) or node.keywords):
                raise ValueError(f"unsupported call in {self.text!r}")
        rng = np.random.default_rng([self.seed, self.stream])
        trig = []

        class _Bind(ast.NodeTransformer):
            # replaces each randtrig(...) by a name bound to its sampled polynomial
            def visit_Call(self, node):
                self.generic_visit(node)
                if node.func.id != "randtrig":
                    return node
                args = [ast.literal_eval(a) for a in node.args]
                if len(args) != 2:
                    raise ValueError("randtrig takes (modes, amplitude)")
                trig.append(random_trig(rng, args[0], float(args[1]), length))
                return ast.copy_location(ast.Name(id=f"_rt{len(trig) - 1}", ctx=ast.Load()), node)

        length = self.length
        tree = ast.fix_missing_locations(_Bind().visit(tree))
        object.__setattr__(self, "_code", compile(tree, "<initial data>", "eval"))
        object.__setattr__(self, "_trig", trig)

    def __call__(self, x):
        env = {"__builtins__": {}, "x": x, "pi": np.pi, "L": self.length, **_FUNCS}
        env.update({f"_rt{i}": f(x) for i, f in enumerate(self._trig)})
        out = eval(self._code, env)  # noqa: S307 - AST whitelisted above
        return np.broadcast_to(out, np.shape(x)) + 0 * x


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def read_pairs(text: str) -> dict[str, tuple[str, int]]:
    """Split config text into ``{key: (value, line_number)}``."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}; known keys: {', '.join(KEYS)}", lineno)
        if key in pairs:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        pairs[key] = (value, lineno)
    return pairs


def parse_config(text: str) -> SimConfig:
    """Build a validated :class:`SimConfig`; errors name the offending line."""
    pairs = read_pairs(text)

    def get(key, convert, default):
        if key not in pairs:
            return default
        value, lineno = pairs[key]
        try:
            return convert(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None

    def line_of(key):
        return pairs[key][1] if key in pairs else None

    def model_kind(name):
        if name.lower() not in MODEL_NAMES:
            raise ValueError(f"unknown model {name!r}; choose from {sorted(MODEL_NAMES)}")
        return MODEL_NAMES[name.lower()]

    def coupling(name):
        ModelSpec(ModelKind.LINEAR_EXACT, name)
        return name

    kind = get("model", model_kind, ModelKind.QUADRATIC_QUADRATIC)
    model = ModelSpec(kind, get("g", coupling, "identity"))
    n_cells = get("n_cells", int, 256)
    length = get("length", float, 1.0)
    try:
        grid = PeriodicGrid(n_cells, length)
    except ValueError as exc:
        key = "n_cells" if "n_cells" in str(exc) else "length"
        raise ConfigError(str(exc), line_of(key)) from None
    seed = get("seed", int, 0)

    def expr(stream):
        return lambda text: InitialExpression(text, length, seed, stream)

    v0 = get("v0", expr(0), None)
    u0 = get("u0", expr(2), None)
    if kind is ModelKind.PSYSTEM:
        if "m0" in pairs:
            raise ConfigError("the p-system evolves (v, w); give w0 instead of m0", line_of("m0"))
        second = get("w0", expr(1), InitialExpression("0", length))
    else:
        if "w0" in pairs:
            raise ConfigError("w0 applies only to model = psystem", line_of("w0"))
        second = get("m0", expr(1), InitialExpression("1", length))
        try:
            m_sample = np.asarray(second(grid.centers), float)
        except Exception as exc:
            raise ConfigError(f"m0: cannot evaluate ({exc})", line_of("m0")) from None
        if not np.all(m_sample > 0):
            raise ConfigError(f"m0 must be strictly positive; min over the grid is {m_sample.min()!r}",
                              line_of("m0"))
    if v0 is None:
        if u0 is not None:
            from .exact import complex_step_derivative
            v0 = lambda x, _u=u0: complex_step_derivative(_u, x)  # noqa: E731
        else:
            v0 = InitialExpression("0", length)
    if kind is ModelKind.LINEAR_EXACT and u0 is None:
        u0 = InitialExpression("0", length)

    t_end = get("t_end", float, 1.0)
    snapshot_interval = get("snapshot_interval", float, None)
    cfl = get("cfl", float, 0.5)
    epsilon = get("epsilon", float, 0.0)
    recenter = get("recenter", _parse_bool, False)
    try:
        return SimConfig(
            model=model,
            grid=grid,
            t_end=t_end,
            v0=v0,
            m0=second,
            cfl=cfl,
            epsilon=epsilon,
            snapshot_interval=snapshot_interval if snapshot_interval is not None else t_end / 10,
            u0=u0,
            seed=seed,
            recenter=recenter,
        )
    except ValueError as exc:
        msg = str(exc)
        key = next((k for k in ("t_end", "cfl", "epsilon", "snapshot_interval") if k in msg), None)
        raise ConfigError(msg, line_of(key) if key else None) from None
