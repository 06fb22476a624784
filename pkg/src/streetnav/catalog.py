"""Every user-facing message template in one table.

Golden tests and the UI both key off these ids, so changing a string
here is a deliberate, reviewable act. Placeholders are str.format
fields; the announcer fills them with already-rendered pieces (rounded
distances, compass names, joined lists).
"""

CATALOG = {
    # Panning.
    "now_facing": "Now facing: {compass}.",
    "can_move_forward": "You can move forward along {road}.",
    "cannot_move_forward": "You cannot move forward.",
    "facing_place": "{name} is {distance} away.",

    # Movement.
    "stepped_forward": "You stepped forward {distance}.",
    "stepped_backward": "You stepped backward {distance}.",
    "jumped": "You jumped {distance}.",
    "jumped_to_intersection": "You jumped {distance} to the next intersection.",
    "went_back": "You went back {distance}.",
    "now_on_road": "You are now on {road}.",
    "arrived_at_intersection": "You arrived at the intersection of {roads}.",
    "left_intersection": "You left the intersection of {roads}.",
    "place_now": "{name} is now {position} {distance} away.",
    "place_still": "{name} is still {position} but now {distance} away.",
    "been_here_before": "You have been here before.",

    # Movement availability.
    "cannot_move_heading": "You cannot move {direction} along your current heading of {compass}.",
    "can_move_directions": "You can move in {count} directions: {directions}.",
    "can_move_one_direction": "You can move in one direction: {directions}.",
    "cannot_move_any": "You cannot move in any direction.",

    # Teleporting.
    "teleported": "You teleported {distance} from {origin} to {destination}.",
    "destination_with_locality": "{street} in {locality}",
    "facing_and_moves": "You are facing {compass} and can move in {count} directions: {directions}.",
    "facing_and_moves_one": "You are facing {compass} and can move in one direction: {directions}.",
    "facing_no_moves": "You are facing {compass} and cannot move in any direction.",

    # Nearby places.
    "no_places": "There are no places within {radius} meters.",
    "one_place": "There is one place within {radius} meters: {listing}.",
    "many_places": "There are {count} places within {radius} meters, including: {listing}.",
    "place_item": "{article} {type}, {name}, is {position} {distance} away",
    "place_group": "{names} are {position} less than {limit} meters away",

    # Intersections.
    "at_intersection": "You are at the intersection of {roads}.",
    "not_at_intersection": "You are not at an intersection.",
    "next_intersection": "The next intersection, {roads}, is {distance} ahead.",
    "no_next_intersection": "No intersection within {distance} ahead.",

    # Pano metadata and history.
    "image_metadata": "This Street View image was taken on {month} {year} by {photographer}.",
    "first_visit": "This is your first visit to this location.",
    "visited_times": "You have visited this location {count} times.",
    "where_am_i": "You are at {address}, facing {compass}.",

    # Failures surfaced to the user.
    "teleport_not_found": "No places found for '{query}'.",
    "teleport_no_imagery": "There is no street imagery near {name}.",
    "nothing_to_undo": "There is no position to go back to.",
    "chat_unavailable": "The chat assistant is not available right now.",
    "chat_failed": "The chat assistant could not answer. Please try again.",
    "describe_failed": "The scene describer is not available right now.",
    "chat_ready": "Chat is ready.",
    "chat_closed": "Chat closed.",
}

# How a place sits relative to the viewer. Movement diffs use the
# conversational forms; teleport and nearby listings use the spatial
# ones, matching how each message reads aloud.
MOVEMENT_POSITION_PHRASES = {
    "in_front": "in front of you",
    "to_your_left": "on your left",
    "to_your_right": "on your right",
    "behind": "behind you",
}

LISTING_POSITION_PHRASES = {
    "in_front": "ahead of you",
    "to_your_left": "to your left",
    "to_your_right": "to your right",
    "behind": "behind you",
}

MONTH_NAMES = (
    "January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December",
)

COUNT_WORDS = ("zero", "one", "two", "three", "four", "five", "six",
               "seven", "eight", "nine", "ten")


def count_word(n: int) -> str:
    return COUNT_WORDS[n] if 0 <= n < len(COUNT_WORDS) else str(n)


def with_article(noun: str) -> str:
    article = "an" if noun[:1].lower() in "aeiou" else "a"
    return f"{article} {noun}"


def oxford_join(items) -> str:
    items = list(items)
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    if len(items) == 2:
        return f"{items[0]} and {items[1]}"
    return ", ".join(items[:-1]) + f", and {items[-1]}"
