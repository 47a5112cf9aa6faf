from typing import Any, Dict, Type
import pydantic


def _parse_typed(value: Any) -> Any:
    if isinstance(value, dict) and "type" in value:
        return TypedModel.parse_obj(value)
    if isinstance(value, list):
        return [_parse_typed(v) for v in value]
    return value


class BaseModel(pydantic.BaseModel):
    def __init__(self, **data):
        for key, value in data.items():
            data[key] = _parse_typed(value)
        super().__init__(**data)

    class Config:
        extra = pydantic.Extra.forbid


# Adapted from https://github.com/pydantic/pydantic/discussions/3091
class TypedModel(BaseModel):
    _subtypes_: Dict[str, Type["TypedModel"]] = {}

    def __init_subclass__(cls, type=None):
        if type is None:
            return
        if type in cls._subtypes_:
            raise ValueError(f"Type {type} registered twice")
        cls._subtypes_[type] = cls

    @classmethod
    def get_cls(_cls, type):
        sub = _cls._subtypes_.get(type)
        if sub is None or not issubclass(sub, _cls):
            raise ValueError(f"Unknown type {type} for {_cls.__name__}")
        return sub

    @classmethod
    def get_type(_cls, cls_name):
        for t, cls in _cls._subtypes_.items():
            if cls.__name__ == cls_name:
                return t
        raise ValueError(f"Unknown class {cls_name}")

    @classmethod
    def parse_obj(cls, obj):
        if isinstance(obj, TypedModel):
            return obj
        data_type = obj.get("type")
        if data_type is None:
            raise ValueError(f"type is required for {cls.__name__}")
        sub = cls.get_cls(data_type)
        return sub(**{k: v for k, v in obj.items() if k != "type"})

    def _iter(self, **kwargs):
        yield "type", self.get_type(self.__class__.__name__)
        yield from super()._iter(**kwargs)

    @property
    def type(self):
        return self.get_type(self.__class__.__name__)
