# Command implementations for the scalefuture CLI