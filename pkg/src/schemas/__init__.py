from .run import Manifest, RunConfig, RunRead

__all__ = ["Manifest", "RunConfig", "RunRead"]
