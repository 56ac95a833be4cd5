"""Big-chooser/little-chooser process on k matchboxes of n matches each."""

__version__ = "0.1.0"
