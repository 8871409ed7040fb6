from abc import abstractmethod
from typing import Optional

from django.conf import settings
from django.utils.module_loading import import_string

from geometry.coords import BBox

__all__ = ("BaseCaptionProvider", "get_provider")


class BaseCaptionProvider:
    def __init__(self, settings: Optional[dict] = None):
        self.settings = settings or {}

    @abstractmethod
    def describe(self, image_id: str, bbox: BBox, hint: Optional[str] = None) -> str:
        raise NotImplementedError

    def refine(self, caption: str) -> Optional[str]:
        """Second captioning pass; ``None`` drops the record."""
        return caption


def get_provider(name: str) -> BaseCaptionProvider:
    caption_provider = settings.CAPTION_PROVIDERS[name]
    provider = import_string(caption_provider["class"])
    return provider(caption_provider.get("settings", {}))
