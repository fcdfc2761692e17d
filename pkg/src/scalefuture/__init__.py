# scalefuture: scale-invariant future timelines from Laplace-domain memory