from spatial.models import QAKind

__all__ = ("QUESTION_TEMPLATES", "DIRECTIONS")

DIRECTIONS = ("front", "left", "back", "right")

QUESTION_TEMPLATES = {
    QAKind.COUNT: "How many {category}(s) are in this room?",
    QAKind.ABS_DISTANCE: (
        "Measuring between their centers, what is the distance between the {a} "
        "and the {b} (in meters)?"
    ),
    QAKind.REL_DISTANCE: (
        "Measuring from the center of each object, which of these objects "
        "({options}) is the closest to the {target}?"
    ),
    QAKind.OBJ_SIZE: (
        "What is the length of the longest dimension (length, width, or height) "
        "of the {object}, measured in centimeters?"
    ),
    QAKind.ROOM_SIZE: "What is the floor area of this room (in square meters)?",
    QAKind.REL_DIRECTION: (
        "If I am standing by the {standing} and facing the {facing}, "
        "is the {query} to my front, back, left, or right?"
    ),
}
