# Core numerics: grid, Laplace memory, associations and future timelines