# Empty __init__.py to make utils a package