from typing import Optional

from geometry.coords import BBox
from grounding.providers import BaseCaptionProvider

__all__ = ("TemplateCaptionProvider",)


class TemplateCaptionProvider(BaseCaptionProvider):
    """Deterministic ``"the {category} region"`` captions, no model involved."""

    TEMPLATE = "the {category} region"

    def describe(self, image_id: str, bbox: BBox, hint: Optional[str] = None) -> str:
        category = hint if hint is not None else self.settings.get("fallback", "object")
        return self.TEMPLATE.format(category=category)

    def refine(self, caption: str) -> Optional[str]:
        caption = " ".join(caption.split())
        if caption == " ".join(self.TEMPLATE.format(category="").split()):
            return None
        return caption or None
