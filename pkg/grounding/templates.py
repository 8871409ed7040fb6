from grounding.models import TaskKind

__all__ = ("QUESTION_TEMPLATES",)

# {description} is the caption, {markup} the rendered geometry.
QUESTION_TEMPLATES = {
    TaskKind.BOX_FROM_TEXT: (
        "Please provide the bounding box of {description}.",
        "Locate {description} in the image and output its bounding box.",
        "Where is {description}? Answer with a bounding box.",
        "Detect {description} and give its box coordinates.",
        "Output the bounding box that encloses {description}.",
        "Find {description}. Respond with the box that covers it.",
    ),
    TaskKind.POINT_FROM_TEXT: (
        "Point to {description}.",
        "Please mark a point on {description}.",
        "Where is {description}? Answer with a point.",
        "Give the coordinates of a point on {description}.",
        "Locate {description} and output one point inside it.",
        "Click on {description}.",
    ),
    TaskKind.TEXT_FROM_COORDS: (
        "What is the object in the region {markup}?",
        "Describe the object at {markup}.",
        "Identify what is located in {markup}.",
        "Which object occupies {markup}?",
        "Name the object inside {markup}.",
        "What can be seen in {markup}?",
    ),
}
