from hypothesis import settings

# fixed example sequences keep suite runtime and failures reproducible
settings.register_profile("famcat", derandomize=True, deadline=None)
settings.load_profile("famcat")
