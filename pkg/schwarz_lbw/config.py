""" file:    config.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Thursday, 15 October 2026

    description: Scenario configuration with YAML loading and line-anchored
        validation
"""

import copy
from dataclasses import dataclass, field, fields, is_dataclass, asdict
import logging
import os
from typing import ClassVar

import yaml
from yaml.constructor import SafeConstructor

from .coarse_space import CoarseConfig
from .errors import ConfigurationError, InvalidArgumentError
from .materials import MaterialTable, load_material_table

LOGGER = logging.getLogger('schwarz_lbw')

positive = (lambda val: val > 0, 'must be positive')
nonnegative = (lambda val: val >= 0, 'must be nonnegative')
at_least_one = (lambda val: val >= 1, 'must be at least one')


def one_of(*choices):
    return (lambda val: val in choices, f'must be one of {", ".join(choices)}')


class Section:

    "Mixin running the per-key checks of a configuration section"

    CHECKS: ClassVar[dict] = {}

    def __post_init__(self):
        for key, (check, message) in self.CHECKS.items():
            value = getattr(self, key)
            values = value if isinstance(value, tuple) else (value,)
            if not all(check(val) for val in values):
                raise ConfigurationError(f"'{key}' {message}, got {value!r}")


@dataclass(frozen=True)
class MeshSection(Section):
    extent: tuple = (10.0, 10.0, 10.0)
    cells: tuple = (8, 8, 8)

    CHECKS: ClassVar[dict] = {'extent': positive, 'cells': at_least_one}


@dataclass(frozen=True)
class BoundarySection(Section):
    clamp_y0: bool = True
    load_face: bool = True


@dataclass(frozen=True)
class DecompositionSection(Section):
    grid: tuple = (2, 2, 2)
    overlap: int = 1
    first_level: str = 'restricted'
    two_level: bool = True

    CHECKS: ClassVar[dict] = {'grid': at_least_one, 'overlap': nonnegative,
                              'first_level': one_of('restricted', 'additive')}


@dataclass(frozen=True)
class CoarseSection(Section):
    space: str = 'GDSW*(T+R)-RGDSW'
    center: tuple = field(default=None, metadata={'kind': (float, 3)})
    truncation: float = 1e-4
    relative_truncation: bool = True
    recycle: str = 'reuse-all'

    CHECKS: ClassVar[dict] = {'truncation': nonnegative,
                              'recycle': one_of('rebuild-all', 'reuse-phi', 'reuse-all')}

    def __post_init__(self):
        super().__post_init__()
        self.config()

    def config(self):
        "The CoarseConfig of this section"
        try:
            return CoarseConfig.parse(self.space, center=self.center,
                                      truncation=self.truncation,
                                      relative_truncation=self.relative_truncation)
        except InvalidArgumentError as err:
            raise ConfigurationError(str(err))


@dataclass(frozen=True)
class GmresSection(Section):
    rtol: float = 1e-6
    atol: float = 1e-10
    max_iter: int = 1000
    restart: int = 200

    CHECKS: ClassVar[dict] = {'rtol': positive, 'atol': positive,
                              'max_iter': at_least_one, 'restart': at_least_one}


@dataclass(frozen=True)
class NewtonSection(Section):
    atol: float = 1e-4
    max_iter: int = 20
    tangent: str = 'consistent'
    divergence_window: int = 3

    CHECKS: ClassVar[dict] = {'atol': positive, 'max_iter': at_least_one,
                              'tangent': one_of('printed', 'consistent'),
                              'divergence_window': at_least_one}


@dataclass(frozen=True)
class SolverSection(Section):
    gmres: GmresSection = field(default_factory=GmresSection)
    newton: NewtonSection = field(default_factory=NewtonSection)


@dataclass(frozen=True)
class TimeSection(Section):
    dt: float = 1e-3
    total: float = 5e-3

    CHECKS: ClassVar[dict] = {'dt': positive, 'total': nonnegative}

    @property
    def n_steps(self):
        "Number of backward Euler steps covering the total time"
        return int(round(self.total / self.dt))


@dataclass(frozen=True)
class LaserSection(Section):
    enabled: bool = True
    center: tuple = (5.0, 5.0)
    radius: float = 2.0
    rate: float = 14400.0
    melt_temperature: float = 1460.0
    initial_temperature: float = 20.0
    init_duration: float = 0.1
    velocity: float = 0.0

    CHECKS: ClassVar[dict] = {'radius': positive, 'init_duration': nonnegative,
                              'rate': nonnegative}


@dataclass(frozen=True)
class LoadSection(Section):
    strain: float = 0.03
    strain_rate: float = 0.06
    start_time: float = 0.0
    interpret: str = 'strain'

    CHECKS: ClassVar[dict] = {'start_time': nonnegative,
                              'interpret': one_of('strain', 'displacement')}


@dataclass(frozen=True)
class OutputSection(Section):
    directory: str = '.'
    dump_fields: bool = False
    show_progress: bool = False


@dataclass(frozen=True)
class Scenario(Section):

    """
    A complete experiment description

    Parameters:
        name - a label used for report files
        mesh, boundary, decomposition, coarse, solver, time, laser, load,
            output - the configuration sections
        materials - path of a material table YAML file, or None for the
            embedded 1.4301 table
        compare - coarse space labels run by the `compare` command
        threads - the number of worker threads
    """

    name: str = 'scenario'
    mesh: MeshSection = field(default_factory=MeshSection)
    boundary: BoundarySection = field(default_factory=BoundarySection)
    decomposition: DecompositionSection = field(default_factory=DecompositionSection)
    coarse: CoarseSection = field(default_factory=CoarseSection)
    solver: SolverSection = field(default_factory=SolverSection)
    time: TimeSection = field(default_factory=TimeSection)
    laser: LaserSection = field(default_factory=LaserSection)
    load: LoadSection = field(default_factory=LoadSection)
    output: OutputSection = field(default_factory=OutputSection)
    materials: str = field(default=None, metadata={'kind': str})
    compare: tuple = field(default=(), metadata={'kind': (str, None)})
    threads: int = 1

    CHECKS: ClassVar[dict] = {'threads': at_least_one}

    def material_table(self):
        "The material table of the scenario"
        if self.materials is None:
            return MaterialTable()
        return load_material_table(self.materials)

    def replace(self, **sections):
        """
        Copy with overrides given as nested dicts or section instances, e.g.
        scenario.replace(coarse={'space': 'GDSW(T)-GDSW'})
        """
        data = to_dict(self)
        _merge(data, sections)
        return scenario_from_dict(data)


def to_dict(scenario):
    "Plain nested dict of a scenario (tuples become lists)"
    def convert(value):
        if isinstance(value, dict):
            return {key: convert(val) for key, val in value.items()}
        if isinstance(value, (list, tuple)):
            return [convert(val) for val in value]
        return value
    return convert(asdict(scenario))


def _merge(target, updates):
    for key, value in updates.items():
        if is_dataclass(value):
            value = asdict(value)
        if isinstance(value, dict) and isinstance(target.get(key), dict):
            _merge(target[key], value)
        else:
            target[key] = copy.deepcopy(value)


def _default(fld):
    return fld.default_factory() if callable(fld.default_factory) else fld.default


def _build(cls, data):
    kwargs = {}
    for fld in fields(cls):
        if fld.name not in data:
            continue
        value = data[fld.name]
        default = _default(fld)
        if is_dataclass(default):
            value = _build(type(default), value or {})
        elif isinstance(value, list):
            value = tuple(value)
        kwargs[fld.name] = value
    return cls(**kwargs)


def scenario_from_dict(data):
    """
    Build a Scenario from a nested dict (as in `presets`)

    Raises:
        ConfigurationError for invalid values
    """
    try:
        return _build(Scenario, data)
    except TypeError as err:
        raise ConfigurationError(str(err))


def _kind(fld):
    "Expected (type, length) of a field, length None for scalars or free-length lists"
    if 'kind' in fld.metadata:
        kind = fld.metadata['kind']
        return kind if isinstance(kind, tuple) else (kind, None)
    default = fld.default
    if isinstance(default, tuple):
        return (type(default[0]), len(default))
    return (type(default), None)


class _Validator:

    "Walks a composed YAML node tree against the Scenario dataclasses"

    def __init__(self, source):
        self.source = source
        self.constructor = SafeConstructor()

    def error(self, message, node):
        return ConfigurationError(message, line=node.start_mark.line + 1, source=self.source)

    def value(self, node):
        return self.constructor.construct_object(node, deep=True)

    def scalar(self, node, value, expected, where):
        if expected is bool:
            ok = isinstance(value, bool)
            name = 'a boolean'
        elif expected is int:
            ok = isinstance(value, int) and not isinstance(value, bool)
            name = 'an integer'
        elif expected is float:
            ok = isinstance(value, (int, float)) and not isinstance(value, bool)
            name = 'a number'
        else:
            ok = isinstance(value, str)
            name = 'a string'
        if not ok:
            raise self.error(f'expected {name} for {where!r}, got {value!r}', node)
        return float(value) if expected is float else value

    def section(self, cls, node, target, path):
        if not isinstance(node, yaml.MappingNode):
            raise self.error(f"section '{path or 'root'}' must be a mapping", node)
        known = {fld.name: fld for fld in fields(cls)}
        for key_node, value_node in node.value:
            key = self.value(key_node)
            where = f'{path}.{key}' if path else key
            if key not in known:
                raise self.error(f"unknown key {key!r} in section '{path or 'root'}'", key_node)
            fld = known[key]
            default = _default(fld)
            if is_dataclass(default):
                target[key] = target.get(key) or {}
                self.section(type(default), value_node, target[key], where)
                continue
            target[key] = self.field(fld, value_node, where)
            check = getattr(cls, 'CHECKS', {}).get(key)
            if check is not None and target[key] is not None:
                predicate, message = check
                values = target[key] if isinstance(target[key], list) else [target[key]]
                if not all(predicate(val) for val in values):
                    raise self.error(f'{where!r} {message}, got {target[key]!r}', value_node)

    def field(self, fld, node, where):
        expected, length = _kind(fld)
        value = self.value(node)
        if value is None:
            if fld.default is None:
                return None
            raise self.error(f'missing value for {where!r}', node)
        if isinstance(fld.default, tuple) or isinstance(fld.metadata.get('kind'), tuple):
            if not isinstance(node, yaml.SequenceNode):
                raise self.error(f'expected a list for {where!r}', node)
            if length is not None and len(node.value) != length:
                raise self.error(f'expected {length} entries for {where!r}, '
                                 f'got {len(node.value)}', node)
            return [self.scalar(item, self.value(item), expected, f'{where}[{idx}]')
                    for idx, item in enumerate(node.value)]
        return self.scalar(node, value, expected, where)


def load_scenario(filename, base=None):
    """
    Load a scenario from a YAML file

    The file may name a preset with a top level `preset: cube` key; its
    values are overridden by the rest of the file. Every diagnostic names
    the offending line.

    Parameters:
        filename - path to the YAML scenario
        base - a nested dict of starting values. Optional, defaults to the
            preset named in the file or the built-in defaults.

    Returns:
        a Scenario
    """
    from . import presets

    source = str(filename)
    with open(filename, 'r') as src:
        text = src.read()
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as err:
        mark = err.problem_mark or err.context_mark
        raise ConfigurationError(f'{err.problem}', line=mark.line + 1 if mark else None,
                                 source=source)

    data = copy.deepcopy(base) if base is not None else {}
    validator = _Validator(source)
    if root is not None:
        if not isinstance(root, yaml.MappingNode):
            raise validator.error('a scenario file must hold a mapping', root)
        remaining = []
        for key_node, value_node in root.value:
            if validator.value(key_node) == 'preset':
                name = validator.value(value_node)
                if name not in presets.PRESETS:
                    raise validator.error(f'unknown preset {name!r}, expected one of '
                                          f'{sorted(presets.PRESETS)}', value_node)
                merged = copy.deepcopy(presets.PRESETS[name])
                _merge(merged, data)
                data = merged
            else:
                remaining.append((key_node, value_node))
        root.value = remaining
        validator.section(Scenario, root, data, '')

    if data.get('materials'):
        data['materials'] = os.path.join(os.path.dirname(os.path.abspath(source)),
                                         data['materials'])
    try:
        scenario = scenario_from_dict(data)
    except ConfigurationError as err:
        raise ConfigurationError(str(err), source=source)
    LOGGER.info(f'Loaded scenario {scenario.name!r} from {source}')
    return scenario


def dump_scenario(scenario, filename):
    "Write a scenario as YAML"
    with open(filename, 'w') as sink:
        yaml.safe_dump(to_dict(scenario), sink, default_flow_style=None, sort_keys=False)
    return filename
