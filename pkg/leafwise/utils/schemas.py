"""Input schemas for every JSON file the CLI accepts. Validation errors carry the path (loc)
of the offending field."""
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from leafwise.circle.circle_map import CircleMap, CommutingFamily
from leafwise.cohomology.leafwise_forms import LeafwiseOneForm
from leafwise.diophantine.action_matrix import ActionMatrix
from leafwise.fourier.fourier_io import series_from_json
from leafwise.fourier.fourier_series import FourierSeries
from leafwise.lie.lie_algebra import LieAlgebra
from leafwise.suspension.mayer_vietoris import SuspensionData

Entry = Union[float, str]


class CoefficientModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    m: list[int]
    re: float = 0.0
    im: float = 0.0


class SeriesModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dims: int = Field(ge=1)
    real: bool = False
    coeffs: list[CoefficientModel] = []

    @model_validator(mode='after')
    def _modes_match_dims(self):
        for i, c in enumerate(self.coeffs):
            if len(c.m) != self.dims:
                raise ValueError(f"coeffs[{i}].m has {len(c.m)} entries, expected dims = {self.dims}")
        return self

    def to_series(self) -> FourierSeries:
        return series_from_json(self.model_dump())


class OneFormModel(BaseModel):
    """A leafwise 1-form: one series per generating vector."""
    model_config = ConfigDict(extra='forbid')

    components: list[SeriesModel] = Field(min_length=1)

    def to_form(self, V: ActionMatrix) -> LeafwiseOneForm:
        return LeafwiseOneForm(V, [c.to_series() for c in self.components])


class MatrixModel(BaseModel):
    """Rows of a real matrix; strings such as "1/3" are read as exact rationals."""
    model_config = ConfigDict(extra='forbid')

    rows: list[list[Entry]] = Field(min_length=1)

    @field_validator('rows', mode='before')
    @classmethod
    def _single_vector(cls, rows):
        # a flow may be given as one bare vector
        if isinstance(rows, list) and rows and not any(isinstance(r, list) for r in rows):
            return [rows]
        return rows

    @field_validator('rows')
    @classmethod
    def _rectangular(cls, rows):
        if len({len(r) for r in rows}) != 1 or not rows[0]:
            raise ValueError("rows must be non-empty and of equal length")
        return rows

    def to_action(self) -> ActionMatrix:
        return ActionMatrix(self.rows)


class IntegerMatrixModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    rows: list[list[int]] = Field(min_length=1)


class StructureConstantModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    i: int = Field(ge=1)
    j: int = Field(ge=1)
    k: int = Field(ge=1)
    val: float


class AlgebraModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    n: int = Field(ge=1)
    c: list[StructureConstantModel] = []
    matrices: Optional[list[list[list[float]]]] = None
    name: str = ""

    @model_validator(mode='after')
    def _indices_in_range(self):
        for idx, entry in enumerate(self.c):
            if max(entry.i, entry.j, entry.k) > self.n:
                raise ValueError(f"c[{idx}] indexes a basis vector beyond n = {self.n}")
        if self.matrices is not None and len(self.matrices) != self.n:
            raise ValueError(f"{len(self.matrices)} matrices for an algebra of dimension {self.n}")
        return self

    def to_algebra(self) -> LieAlgebra:
        return LieAlgebra.from_json(self.model_dump(exclude_none=True))


class SuspensionModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dims: list[int] = Field(min_length=2)
    maps: list[list[list[Entry]]]

    @model_validator(mode='after')
    def _one_map_per_degree(self):
        if len(self.maps) != len(self.dims):
            raise ValueError(f"{len(self.maps)} maps for {len(self.dims)} degrees")
        return self

    def to_suspension(self) -> SuspensionData:
        return SuspensionData(self.dims, self.maps)


class CircleMapModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    drift: float
    periodic: Optional[SeriesModel] = None

    @field_validator('periodic')
    @classmethod
    def _on_the_circle(cls, periodic):
        if periodic is not None and periodic.dims != 1:
            raise ValueError(f"periodic part must live on T^1, got dims = {periodic.dims}")
        return periodic

    def to_map(self) -> CircleMap:
        return CircleMap(self.drift, self.periodic.to_series() if self.periodic else None)


class FamilyModel(BaseModel):
    model_config = ConfigDict(extra='forbid')

    maps: list[CircleMapModel] = Field(min_length=1)
    commutation_tol: Optional[float] = None

    def to_family(self) -> CommutingFamily:
        return CommutingFamily([m.to_map() for m in self.maps], self.commutation_tol)


def parse(model: type[BaseModel], data, wrap: Optional[str] = None) -> BaseModel:
    """Validate data against model. A bare JSON list is accepted for single-field models
    by wrapping it under the field named by wrap."""
    if wrap is not None and isinstance(data, list):
        data = {wrap: data}
    return model.model_validate(data)


def format_validation_error(exc: ValidationError, source: str = "") -> list[str]:
    lines = []
    for error in exc.errors():
        loc = ".".join(str(part) for part in error.get('loc', ())) or "<root>"
        lines.append(f"{source + ': ' if source else ''}{loc}: {error.get('msg')}")
    return lines
