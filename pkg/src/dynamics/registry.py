"""Registry for discovering and constructing dynamics models by name."""

import logging
from typing import Callable, Dict, List

from src.core.exceptions import DynamicsError
from src.dynamics.base import DynamicsModel

logger = logging.getLogger(__name__)

ModelFactory = Callable[..., DynamicsModel]


class ModelRegistry:
    """Maps model names from experiment configs to factories."""

    def __init__(self):
        self._factories: Dict[str, ModelFactory] = {}
        self._initialize_models()

    def _initialize_models(self):
        # Imported here to keep base free of concrete models
        from src.dynamics.bicycle import BicycleParams, KinematicBicycleModel
        from src.dynamics.table import TableDrivenModel

        self.register("bicycle", lambda **params: KinematicBicycleModel(BicycleParams(**params)))
        self.register("table", self._table_factory(TableDrivenModel))

    @staticmethod
    def _table_factory(cls) -> ModelFactory:
        def create(path: str = None, **params) -> DynamicsModel:
            if not path:
                raise DynamicsError("table model requires a 'path' parameter")
            if params:
                raise DynamicsError(f"unexpected table model parameters {sorted(params)}")
            return cls.load(path)
        return create

    def register(self, name: str, factory: ModelFactory) -> None:
        self._factories[name] = factory
        logger.debug(f"Registered dynamics model {name}")

    def create(self, name: str, **params) -> DynamicsModel:
        factory = self._factories.get(name)
        if factory is None:
            raise DynamicsError(f"unknown dynamics model {name!r}; available: {self.list_models()}")
        return factory(**params)

    def list_models(self) -> List[str]:
        return sorted(self._factories)


# Global registry instance
_registry = None


def get_model_registry() -> ModelRegistry:
    """Get the global model registry instance."""
    global _registry
    if _registry is None:
        _registry = ModelRegistry()
    return _registry
