# Tests package initialization